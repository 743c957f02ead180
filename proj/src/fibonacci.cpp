#include "gtop/fibonacci.hpp"

#include "gtop/codec.hpp"
#include "gtop/error.hpp"

namespace gtop {

namespace {

constexpr int kX = 1;
constexpr int kY = 2;

Word concat(const Word& a, const Word& b) {
  std::vector<int> letters = a.letters;
  letters.insert(letters.end(), b.letters.begin(), b.letters.end());
  return reduce(std::move(letters));
}

}  // namespace

Group fib_group() { return Group::free({"x", "y"}); }

Word phi_apply(const Word& w) {
  std::vector<int> out;
  for (int l : w.letters) {
    switch (l) {
      case kX:
        out.push_back(kY);
        break;
      case kY:
        out.insert(out.end(), {kX, kY});
        break;
      case -kX:
        out.push_back(-kY);
        break;
      case -kY:
        out.insert(out.end(), {-kY, -kX});
        break;
      default:
        throw PreconditionError("phi is defined on words in x and y only");
    }
  }
  return reduce(std::move(out));
}

Word phi_iterate(Word w, unsigned n) {
  for (unsigned i = 0; i < n; ++i) {
    w = phi_apply(w);
  }
  return w;
}

FibWord fib_word(unsigned n) {
  Word prev{{kX}};
  if (n == 0) {
    return {prev, 0};
  }
  Word cur{{kY}};
  for (unsigned k = 1; k < n; ++k) {
    Word next = concat(prev, cur);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur, n};
}

Word commutator(const Word& a, const Word& b) {
  return concat(concat(a, b), concat(word_inverse(a), word_inverse(b)));
}

Word commutator_xy() { return commutator(Word{{kX}}, Word{{kY}}); }

VerificationReport verify_fib_identity(unsigned n) {
  Group g = fib_group();
  VerificationReport report("fibonacci identity");
  Word a = phi_iterate(Word{{kX}}, n);
  Word b = phi_apply(a);
  Word lhs = phi_iterate(commutator_xy(), n);
  Word rhs = commutator(a, b);
  Word expected = n % 2 == 0 ? commutator_xy() : word_inverse(commutator_xy());
  bool ok = lhs == rhs && lhs == expected;
  report.add("fibonacci.identity/n=" + std::to_string(n), ok ? Status::verified : Status::refuted,
             {{"product", product_witness(g, {a, b, word_inverse(a), word_inverse(b)}, expected)},
              {"phi_n_commutator", g.format(lhs)},
              {"parity", n % 2 == 0 ? "even" : "odd"}});
  return report;
}

VerificationReport verify_fibonacci(unsigned n_max) {
  Group g = fib_group();
  VerificationReport report("fibonacci");
  report.budgets() = {{"n", n_max}};
  Word iter{{kX}};
  // Lengths 1, 1, 2, 3, 5, ...
  Int len_prev = 1;
  Int len_cur = 1;
  for (unsigned n = 0; n <= n_max; ++n) {
    if (n > 0) {
      iter = phi_apply(iter);
    }
    Word rec = fib_word(n).word;
    report.add("fibonacci.recurrence/n=" + std::to_string(n), rec == iter ? Status::verified : Status::refuted,
               {{"length", rec.letters.size()}});
    Int expect_len = n == 0 ? len_prev : len_cur;
    if (n >= 1) {
      Int next = len_prev + len_cur;
      len_prev = len_cur;
      len_cur = next;
    }
    report.add("fibonacci.length/n=" + std::to_string(n),
               Int(static_cast<std::int64_t>(rec.letters.size())) == expect_len ? Status::verified : Status::refuted,
               {{"length", rec.letters.size()}, {"fibonacci", int_to_json(expect_len)}});
    report.merge(verify_fib_identity(n));
  }
  Word c = commutator_xy();
  report.add("fibonacci.phi_inverts_commutator", phi_apply(c) == word_inverse(c) ? Status::verified : Status::refuted,
             {{"phi", g.format(phi_apply(c))}});
  report.add("fibonacci.phi2_fixes_commutator", phi_iterate(c, 2) == c ? Status::verified : Status::refuted,
             {{"phi2", g.format(phi_iterate(c, 2))}});
  return report;
}

}  // namespace gtop
