#include "gtop/setspec.hpp"

#include <algorithm>
#include <sstream>

#include "gtop/error.hpp"

namespace gtop {

namespace {

void sort_unique(std::vector<Element>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_same(const SetSpec& a, const SetSpec& b) {
  if (!(a.group() == b.group())) {
    throw GroupMismatch("sets live in different groups: " + a.group().name() + " vs " + b.group().name());
  }
}

bool has_residue(const ResidueSet& r, const Int& v) { return std::binary_search(r.residues.begin(), r.residues.end(), v); }

std::vector<std::int64_t> full_range(std::size_t n) {
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::int64_t>(i);
  }
  return out;
}

const std::vector<std::int64_t>& allowed_at(const BoxSet& b, std::size_t n, std::vector<std::int64_t>& scratch) {
  if (n <= b.allowed.size()) {
    return b.allowed[n - 1];
  }
  scratch = full_range(n);
  return scratch;
}

}  // namespace

SetSpec SetSpec::finite(const Group& group, std::vector<Element> elements) {
  for (const auto& e : elements) {
    group.check(e);
  }
  sort_unique(elements);
  return SetSpec(group, FiniteSet{std::move(elements)});
}

SetSpec SetSpec::residue(Int modulus, std::vector<Int> residues) {
  if (modulus < Int(1)) {
    throw PreconditionError("residue modulus must be positive, got " + modulus.str());
  }
  for (const auto& r : residues) {
    if (r.sign() < 0 || r >= modulus) {
      throw PreconditionError("residue " + r.str() + " outside 0.." + (modulus - Int(1)).str());
    }
  }
  sort_unique(residues);
  return SetSpec(Group::integers(), ResidueSet{std::move(modulus), std::move(residues)});
}

SetSpec SetSpec::box(std::size_t N, std::vector<std::vector<std::int64_t>> allowed) {
  if (allowed.size() > N) {
    throw PreconditionError("box constrains " + std::to_string(allowed.size()) + " coordinates but N = " +
                            std::to_string(N));
  }
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    auto n = static_cast<std::int64_t>(i + 1);
    auto& a = allowed[i];
    sort_unique(a);
    for (auto v : a) {
      if (v < 0 || v >= n) {
        throw PreconditionError("box coordinate " + std::to_string(n) + " value " + std::to_string(v) + " out of range");
      }
      if (!std::binary_search(a.begin(), a.end(), (n - v) % n)) {
        throw PreconditionError("box coordinate " + std::to_string(n) + " is not closed under negation");
      }
    }
    if (a.empty() || a.front() != 0) {
      throw PreconditionError("box coordinate " + std::to_string(n) + " must contain 0");
    }
  }
  return SetSpec(Group::product_mod(N), BoxSet{N, std::move(allowed)});
}

SetSpec SetSpec::interval(Rational epsilon) {
  epsilon.canonicalize();
  if (sgn(epsilon) <= 0) {
    throw PreconditionError("interval radius must be positive");
  }
  return SetSpec(Group::rationals(), SymmetricInterval{std::move(epsilon)});
}

SetSpec SetSpec::tail(SequencePtr sequence, std::size_t start, std::set<std::size_t> excluded) {
  if (!sequence) {
    throw PreconditionError("tail set without a sequence");
  }
  return SetSpec(Group::integers(), TailSet{std::move(sequence), start, std::move(excluded)});
}

bool SetSpec::contains(const Element& g) const {
  group_.check(g);
  if (const auto* f = as<FiniteSet>()) {
    return std::binary_search(f->elements.begin(), f->elements.end(), g);
  }
  if (const auto* r = as<ResidueSet>()) {
    return has_residue(*r, mod(std::get<Int>(g), r->modulus));
  }
  if (const auto* b = as<BoxSet>()) {
    const auto& c = std::get<ResidueVector>(g).coords;
    for (std::size_t n = 1; n <= b->allowed.size(); ++n) {
      if (!std::binary_search(b->allowed[n - 1].begin(), b->allowed[n - 1].end(), c[n - 1])) {
        return false;
      }
    }
    return true;
  }
  if (const auto* iv = as<SymmetricInterval>()) {
    return abs(std::get<Rational>(g)) < iv->epsilon;
  }
  const auto& t = std::get<TailSet>(body_);
  const Int& v = std::get<Int>(g);
  Int a = abs(v);
  for (std::size_t k = t.start;; ++k) {
    Int x = t.sequence->term(k);
    if (abs(x) > a) {
      return false;
    }
    if (x == v && t.allows(k)) {
      return true;
    }
  }
}

std::string SetSpec::describe() const {
  std::ostringstream os;
  if (const auto* f = as<FiniteSet>()) {
    os << '{';
    for (std::size_t i = 0; i < f->elements.size(); ++i) {
      os << (i ? "," : "") << group_.format(f->elements[i]);
    }
    os << '}';
  } else if (const auto* r = as<ResidueSet>()) {
    os << "Res(" << r->modulus << ";{";
    for (std::size_t i = 0; i < r->residues.size(); ++i) {
      os << (i ? "," : "") << r->residues[i];
    }
    os << "})";
  } else if (const auto* b = as<BoxSet>()) {
    os << "Box(N=" << b->N << ";m=" << b->allowed.size() << ")";
  } else if (const auto* iv = as<SymmetricInterval>()) {
    os << "(-" << iv->epsilon.get_str() << "," << iv->epsilon.get_str() << ")";
  } else {
    const auto& t = std::get<TailSet>(body_);
    os << "Tail(" << t.sequence->id() << ";t=" << t.start;
    if (!t.excluded.empty()) {
      os << ";excl={";
      bool first = true;
      for (auto k : t.excluded) {
        os << (first ? "" : ",") << k;
        first = false;
      }
      os << '}';
    }
    os << ')';
  }
  return os.str();
}

ResidueSet symmetric_classes(const ResidueSet& r) {
  ResidueSet out{r.modulus, r.residues};
  for (const auto& v : r.residues) {
    out.residues.push_back(mod(-v, r.modulus));
  }
  sort_unique(out.residues);
  return out;
}

StarSet star(const SetSpec& s) {
  const Group& g = s.group();
  if (const auto* f = s.as<FiniteSet>()) {
    std::vector<Element> out = f->elements;
    for (const auto& e : f->elements) {
      out.push_back(g.neg(e));
    }
    out.push_back(g.identity());
    return StarSet(SetSpec::finite(g, std::move(out)), true);
  }
  if (const auto* r = s.as<ResidueSet>()) {
    if (r->residues.empty()) {
      return StarSet(SetSpec::finite(g, {Element(Int(0))}), true);
    }
    ResidueSet c = symmetric_classes(*r);
    bool zero = has_residue(c, Int(0));
    return StarSet(SetSpec::residue(c.modulus, c.residues), zero);
  }
  if (s.as<TailSet>()) {
    return StarSet(s, false);
  }
  return StarSet(s, true);
}

bool in_star(const SetSpec& s, const Element& g) {
  const Group& grp = s.group();
  if (const auto* r = s.as<ResidueSet>()) {
    grp.check(g);
    Int v = mod(std::get<Int>(g), r->modulus);
    return grp.is_identity(g) || has_residue(*r, v) || has_residue(*r, mod(-v, r->modulus));
  }
  if (s.as<FiniteSet>()) {
    return grp.is_identity(g) || s.contains(g) || s.contains(grp.neg(g));
  }
  return star(s).contains(g);
}

StarSet star_mult(const SetSpec& s) {
  if (!s.as<FiniteSet>()) {
    throw UnsupportedOperation("multiplicative star needs a finite set, got " + s.describe());
  }
  return star(s);
}

bool StarSet::contains(const Element& g) const {
  if (closed_) {
    return base_.contains(g);
  }
  const Group& grp = base_.group();
  return grp.is_identity(g) || base_.contains(g) || base_.contains(grp.neg(g));
}

std::vector<Element> StarSet::enumerate() const {
  if (const auto* f = base_.as<FiniteSet>()) {
    return f->elements;
  }
  if (const auto* b = base_.as<BoxSet>()) {
    std::vector<Element> out;
    for (auto& e : Group::product_mod(b->N).elements()) {
      if (base_.contains(e)) {
        out.push_back(std::move(e));
      }
    }
    return out;
  }
  throw UnsupportedOperation("cannot enumerate " + describe());
}

std::string StarSet::describe() const { return closed_ ? base_.describe() : base_.describe() + "*"; }

SetSpec sumset(const SetSpec& a, const SetSpec& b) {
  require_same(a, b);
  const Group& g = a.group();
  const auto* fa = a.as<FiniteSet>();
  const auto* fb = b.as<FiniteSet>();
  const auto* ra = a.as<ResidueSet>();
  const auto* rb = b.as<ResidueSet>();
  if (fa && fb) {
    std::vector<Element> out;
    out.reserve(fa->elements.size() * fb->elements.size());
    for (const auto& x : fa->elements) {
      for (const auto& y : fb->elements) {
        out.push_back(g.add(x, y));
      }
    }
    return SetSpec::finite(g, std::move(out));
  }
  if (ra && rb) {
    Int m = gcd(ra->modulus, rb->modulus);
    if (m.is_small() && m.to_int64() <= (std::int64_t{1} << 22)) {
      // Reduce both sides mod m, then mark sums in a class table.
      const std::int64_t mm = m.to_int64();
      auto reduce_side = [&](const std::vector<Int>& rs) {
        std::vector<char> seen(static_cast<std::size_t>(mm), 0);
        std::vector<std::int64_t> v;
        for (const auto& x : rs) {
          auto r = mod(x, m).to_int64();
          if (!seen[static_cast<std::size_t>(r)]) {
            seen[static_cast<std::size_t>(r)] = 1;
            v.push_back(r);
          }
        }
        return v;
      };
      auto xs = reduce_side(ra->residues);
      auto ys = reduce_side(rb->residues);
      std::vector<char> hit(static_cast<std::size_t>(mm), 0);
      std::int64_t count = 0;
      for (std::size_t i = 0; i < xs.size() && count < mm; ++i) {
        for (auto y : ys) {
          auto s = xs[i] + y;
          s = s >= mm ? s - mm : s;
          if (!hit[static_cast<std::size_t>(s)]) {
            hit[static_cast<std::size_t>(s)] = 1;
            ++count;
          }
        }
      }
      std::vector<Int> out;
      out.reserve(static_cast<std::size_t>(count));
      for (std::int64_t r = 0; r < mm; ++r) {
        if (hit[static_cast<std::size_t>(r)]) {
          out.emplace_back(r);
        }
      }
      return SetSpec::residue(std::move(m), std::move(out));
    }
    std::vector<Int> out;
    for (const auto& x : ra->residues) {
      for (const auto& y : rb->residues) {
        out.push_back(mod(x + y, m));
      }
    }
    return SetSpec::residue(m, std::move(out));
  }
  if ((fa && rb) || (ra && fb)) {
    const auto* f = fa ? fa : fb;
    const auto* r = ra ? ra : rb;
    std::vector<Int> out;
    for (const auto& x : f->elements) {
      for (const auto& y : r->residues) {
        out.push_back(mod(std::get<Int>(x) + y, r->modulus));
      }
    }
    return SetSpec::residue(r->modulus, std::move(out));
  }
  const auto* ba = a.as<BoxSet>();
  const auto* bb = b.as<BoxSet>();
  if (ba && bb) {
    std::size_t m = std::min(ba->allowed.size(), bb->allowed.size());
    std::vector<std::vector<std::int64_t>> allowed(m);
    for (std::size_t n = 1; n <= m; ++n) {
      auto nn = static_cast<std::int64_t>(n);
      for (auto x : ba->allowed[n - 1]) {
        for (auto y : bb->allowed[n - 1]) {
          allowed[n - 1].push_back((x + y) % nn);
        }
      }
    }
    return SetSpec::box(ba->N, std::move(allowed));
  }
  const auto* ia = a.as<SymmetricInterval>();
  const auto* ib = b.as<SymmetricInterval>();
  if (ia && ib) {
    return SetSpec::interval(Rational(ia->epsilon + ib->epsilon));
  }
  throw UnsupportedOperation("no exact sumset for " + a.describe() + " + " + b.describe());
}

SetSpec n_fold_star(const SetSpec& s, unsigned n, std::size_t max_elements) {
  if (n == 0) {
    throw PreconditionError("n_fold_star needs n >= 1");
  }
  StarSet st = star(s);
  const SetSpec& base = st.base();
  if (const auto* f = base.as<FiniteSet>()) {
    SetSpec acc = base;
    for (unsigned i = 1; i < n; ++i) {
      std::size_t projected = acc.as<FiniteSet>()->elements.size() * f->elements.size();
      if (projected > max_elements && !acc.group().as<ProductMod>() && !acc.group().as<Cayley>()) {
        throw BudgetExceeded("n-fold product set would enumerate " + std::to_string(projected) + " elements");
      }
      acc = sumset(acc, base);
      if (acc.as<FiniteSet>()->elements.size() > max_elements) {
        throw BudgetExceeded("n-fold product set exceeds " + std::to_string(max_elements) + " elements");
      }
    }
    return acc;
  }
  if (const auto* r = base.as<ResidueSet>()) {
    if (st.closed()) {
      SetSpec acc = base;
      for (unsigned i = 1; i < n; ++i) {
        acc = sumset(acc, base);
      }
      return acc;
    }
    // Classes C plus the point 0: the n-fold sum is the union of kC for
    // k = 1..n together with 0.
    SetSpec k_fold = base;
    std::vector<Int> classes = r->residues;
    for (unsigned i = 1; i < n; ++i) {
      k_fold = sumset(k_fold, base);
      const auto& more = k_fold.as<ResidueSet>()->residues;
      classes.insert(classes.end(), more.begin(), more.end());
    }
    SetSpec out = SetSpec::residue(r->modulus, std::move(classes));
    if (!out.contains(Int(0))) {
      throw UnsupportedOperation("n-fold star of " + s.describe() + " is not a union of residue classes");
    }
    return out;
  }
  if (base.as<BoxSet>()) {
    SetSpec acc = base;
    for (unsigned i = 1; i < n; ++i) {
      acc = sumset(acc, base);
    }
    return acc;
  }
  if (const auto* iv = base.as<SymmetricInterval>()) {
    return SetSpec::interval(Rational(iv->epsilon * n));
  }
  throw UnsupportedOperation("no exact n-fold star for " + s.describe());
}

bool is_subset(const SetSpec& a, const SetSpec& b) {
  require_same(a, b);
  if (const auto* f = a.as<FiniteSet>()) {
    return std::all_of(f->elements.begin(), f->elements.end(), [&](const Element& e) { return b.contains(e); });
  }
  if (const auto* ra = a.as<ResidueSet>()) {
    if (ra->residues.empty()) {
      return true;
    }
    if (const auto* rb = b.as<ResidueSet>()) {
      Int l = lcm(ra->modulus, rb->modulus);
      Int steps = floor_div(l, ra->modulus);
      if (steps * Int(ra->residues.size()) > Int(10'000'000)) {
        throw UnsupportedOperation("residue inclusion too large to check");
      }
      std::int64_t count = steps.to_int64();
      for (const auto& r : ra->residues) {
        for (std::int64_t t = 0; t < count; ++t) {
          if (!has_residue(*rb, mod(r + Int(t) * ra->modulus, rb->modulus))) {
            return false;
          }
        }
      }
      return true;
    }
    // A non-empty union of residue classes is infinite and not sparse.
    if (b.as<FiniteSet>() || b.as<TailSet>()) {
      return false;
    }
  }
  if (const auto* ba = a.as<BoxSet>()) {
    if (const auto* bb = b.as<BoxSet>()) {
      std::vector<std::int64_t> sa, sb;
      for (std::size_t n = 1; n <= ba->N; ++n) {
        const auto& xa = allowed_at(*ba, n, sa);
        const auto& xb = allowed_at(*bb, n, sb);
        if (!std::includes(xb.begin(), xb.end(), xa.begin(), xa.end())) {
          return false;
        }
      }
      return true;
    }
    if (b.as<FiniteSet>()) {
      auto elems = star(a).enumerate();
      return std::all_of(elems.begin(), elems.end(), [&](const Element& e) { return b.contains(e); });
    }
  }
  if (const auto* ia = a.as<SymmetricInterval>()) {
    if (const auto* ib = b.as<SymmetricInterval>()) {
      return ia->epsilon <= ib->epsilon;
    }
    if (b.as<FiniteSet>()) {
      return false;
    }
  }
  if (const auto* ta = a.as<TailSet>()) {
    if (const auto* tb = b.as<TailSet>()) {
      if (ta->sequence->id() != tb->sequence->id()) {
        throw UnsupportedOperation("tail inclusion across different sequences");
      }
      if (ta->start < tb->start) {
        // Indices start_a..start_b-1 must all be excluded from a.
        for (std::size_t k = ta->start; k < tb->start; ++k) {
          if (!ta->excluded.count(k)) {
            return false;
          }
        }
      }
      for (auto k : tb->excluded) {
        if (ta->allows(k)) {
          return false;
        }
      }
      return true;
    }
    if (b.as<FiniteSet>()) {
      return false;
    }
  }
  throw UnsupportedOperation("cannot decide " + a.describe() + " subset of " + b.describe());
}

bool set_equal(const SetSpec& a, const SetSpec& b) { return is_subset(a, b) && is_subset(b, a); }

}  // namespace gtop
