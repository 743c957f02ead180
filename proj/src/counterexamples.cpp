#include "gtop/counterexamples.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gtop/codec.hpp"
#include "gtop/error.hpp"
#include "gtop/hensel.hpp"

namespace gtop {

namespace {

// Canonical roots of 7 modulo 3^k, computed once per level.
HenselWitness root_at(unsigned k) {
  static std::mutex mu;
  static std::vector<HenselWitness> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() < k) {
    cache = hensel_chain(7, 3, std::max<unsigned>(k, 16));
  }
  return cache[k - 1];
}

const SetSpec& cached_s(unsigned k) {
  static std::mutex mu;
  static std::map<unsigned, SetSpec> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(k); it != cache.end()) {
      return it->second;
    }
  }
  const auto w = root_at(k);
  SetSpec s = SetSpec::residue(w.modulus, {Int(0), w.root, mod(-w.root, w.modulus)});
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(k, std::move(s)).first->second;
}

std::string format_vector(const ResidueVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.coords.size(); ++i) {
    s += (i ? "," : "") + std::to_string(v.coords[i]);
  }
  return s + ")";
}

}  // namespace

unsigned sqrt7_exclusion_level(const Int& g, unsigned n) {
  if (g.is_zero()) {
    throw PreconditionError("g must be non-zero");
  }
  std::vector<Int> values;
  for (unsigned m = 0; m <= n; ++m) {
    values.push_back(g * g - Int(7) * Int(m) * Int(m));
  }
  Int power = 3;
  for (unsigned k = 1;; ++k, power *= Int(3)) {
    bool clear = std::none_of(values.begin(), values.end(), [&](const Int& v) { return divides(power, v); });
    if (clear) {
      return k;
    }
  }
}

unsigned sqrt7_bound_level(const Int& g, unsigned n) {
  Int bound = std::max(g * g, Int(7) * Int(n) * Int(n));
  Int power = 3;
  unsigned k = 1;
  while (!(power > bound)) {
    power *= Int(3);
    ++k;
  }
  return k;
}

VerificationReport verify_sqrt7_necessary(const Int& g, unsigned n) {
  if (g.is_zero()) {
    throw PreconditionError("g must be non-zero");
  }
  if (n == 0) {
    throw PreconditionError("n must be at least 1");
  }
  VerificationReport report("sqrt7.necessary");
  unsigned k = sqrt7_exclusion_level(g, n);
  unsigned kb = sqrt7_bound_level(g, n);
  const SetSpec& s = cached_s(k);
  SetSpec nfold = n_fold_star(s, n);
  bool excluded = !nfold.contains(g);
  std::vector<SetSpec> copies(n, s);
  Membership dp = prefix_sum_membership(g, copies);
  bool excluded_at_bound = !n_fold_star(cached_s(kb), n).contains(g);

  json values = json::array();
  for (unsigned m = 0; m <= n; ++m) {
    values.push_back(int_to_json(g * g - Int(7) * Int(m) * Int(m)));
  }
  const auto& r = *nfold.as<ResidueSet>();
  json cert = {{"g", int_to_json(g)},
               {"n", n},
               {"k", k},
               {"bound_k", kb},
               {"values", values},
               {"modulus", int_to_json(r.modulus)},
               {"g_mod", int_to_json(mod(g, r.modulus))},
               {"n_fold_classes", r.residues.size()},
               {"dp", to_string(dp.truth)},
               {"excluded_at_bound", excluded_at_bound},
               {"exclusion", exclusion_to_json(Group::integers(), g, copies)}};
  Status st = Status::verified;
  if (!excluded || dp.truth == Truth::yes || k > kb || !excluded_at_bound) {
    st = Status::refuted;
  } else if (dp.truth == Truth::unknown) {
    st = Status::unknown;
  }
  report.add("sqrt7.necessary/g=" + g.str() + "/n=" + std::to_string(n), st, std::move(cert));
  return report;
}

ResidueSet sqrt7_U_sumset(unsigned m0, const std::vector<unsigned>& ms) {
  SetSpec acc = star(cached_s(m0)).base();
  for (unsigned m : ms) {
    acc = sumset(acc, star(cached_s(m)).base());
  }
  return *acc.as<ResidueSet>();
}

Decomposition sqrt7_U_witness(unsigned m0, const std::vector<unsigned>& ms, const Int& g) {
  if (m0 == 0) {
    throw PreconditionError("m0 must be at least 1");
  }
  Int len = pow(Int(3), m0);
  if (Int(ms.size()) != len) {
    throw PreconditionError("expected " + len.str() + " levels m_1.., got " + std::to_string(ms.size()));
  }
  const Int c = root_at(m0).root;
  Int h = mod(g * *inverse_mod(c, len), len);
  std::size_t hh = static_cast<std::size_t>(h.to_int64());
  std::vector<Element> summands(ms.size() + 1, Element(Int(0)));
  std::vector<SetSpec> sources;
  sources.reserve(ms.size() + 1);
  sources.push_back(cached_s(m0));
  Int rest = g;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] == 0) {
      throw PreconditionError("levels must be at least 1");
    }
    sources.push_back(cached_s(ms[i]));
    if (i < hh) {
      // A root of 7 in S(m_i) congruent to c modulo 3^m0.
      Int ci = ms[i] > m0 ? root_at(ms[i]).root : c;
      summands[i + 1] = ci;
      rest -= ci;
    }
  }
  // rest = g - h c = 0 mod 3^m0, so it lies in S(m0).
  summands[0] = rest;
  return {Group::integers(), g, std::move(summands), std::move(sources)};
}

VerificationReport verify_sqrt7_U_full(unsigned m0, const std::vector<unsigned>& ms, const std::vector<Int>& gs) {
  VerificationReport report("sqrt7.U_full");
  Int len = pow(Int(3), m0);
  if (m0 == 0 || Int(ms.size()) != len) {
    throw PreconditionError("verify_sqrt7_U_full needs m0 >= 1 and exactly 3^m0 further levels");
  }
  ResidueSet cover = sqrt7_U_sumset(m0, ms);
  unsigned max_level = std::max(m0, *std::max_element(ms.begin(), ms.end()));
  bool full = Int(cover.residues.size()) == cover.modulus;
  report.add("sqrt7.U_full/cover", full ? Status::verified : Status::refuted,
             {{"m0", m0},
              {"levels", ms},
              {"sum_modulus", int_to_json(cover.modulus)},
              {"classes", cover.residues.size()},
              {"max_level", max_level},
              {"note", "a union of all classes modulo a divisor of 3^max is all of Z"}});
  for (const auto& g : gs) {
    Decomposition d = sqrt7_U_witness(m0, ms, g);
    bool ok = recheck(d);
    report.add("sqrt7.U_full/g=" + g.str(), ok ? Status::verified : Status::refuted,
               {{"decomposition", decomposition_to_json(d)}});
  }
  return report;
}

SetSpec product_set(std::size_t N, std::size_t m) {
  if (m < 1 || m > N) {
    throw PreconditionError("product_set needs 1 <= m <= N");
  }
  std::vector<std::vector<std::int64_t>> allowed(m);
  for (std::size_t n = 1; n <= m; ++n) {
    auto nn = static_cast<std::int64_t>(n);
    allowed[n - 1] = {0, 1 % nn, (nn - 1) % nn};
  }
  return SetSpec::box(N, std::move(allowed));
}

Decomposition product_sum_witness(std::size_t N, std::size_t m0, const std::vector<std::size_t>& ms,
                                  const ResidueVector& g) {
  if (m0 < 1 || m0 > N || ms.size() != m0) {
    throw PreconditionError("product witness needs 1 <= m0 <= N and m0 further levels");
  }
  Group grp = Group::product_mod(N);
  grp.check(g);
  std::vector<Element> summands;
  std::vector<SetSpec> sources{product_set(N, m0)};
  ResidueVector head{std::vector<std::int64_t>(N, 0)};
  for (std::size_t n = m0 + 1; n <= N; ++n) {
    head.coords[n - 1] = g.coords[n - 1];
  }
  summands.push_back(head);
  for (std::size_t i = 1; i <= m0; ++i) {
    sources.push_back(product_set(N, ms[i - 1]));
    // Summand i carries a 1 in every coordinate n <= m0 with g_n >= i.
    ResidueVector v{std::vector<std::int64_t>(N, 0)};
    for (std::size_t n = 1; n <= m0; ++n) {
      if (g.coords[n - 1] >= static_cast<std::int64_t>(i)) {
        v.coords[n - 1] = 1 % static_cast<std::int64_t>(n);
      }
    }
    summands.push_back(v);
  }
  return {grp, g, std::move(summands), std::move(sources)};
}

VerificationReport verify_product_sum_full(std::size_t N, std::size_t m0, const std::vector<std::size_t>& ms,
                                           const std::vector<ResidueVector>& gs) {
  if (m0 < 1 || m0 > N || ms.size() != m0) {
    throw PreconditionError("verify_product_sum_full needs 1 <= m0 <= N and m0 further levels");
  }
  VerificationReport report("product.sum_full");
  SetSpec acc = product_set(N, m0);
  for (auto m : ms) {
    acc = sumset(acc, product_set(N, m));
  }
  const auto& box = *acc.as<BoxSet>();
  bool full = true;
  for (std::size_t n = 1; n <= box.allowed.size(); ++n) {
    full = full && box.allowed[n - 1].size() == n;
  }
  report.add("product.sum_full/cover", full ? Status::verified : Status::refuted,
             {{"N", N}, {"m0", m0}, {"levels", ms}, {"sum", setspec_to_json(acc)}});
  for (const auto& g : gs) {
    Decomposition d = product_sum_witness(N, m0, ms, g);
    report.add("product.sum_full/g=" + format_vector(g), recheck(d) ? Status::verified : Status::refuted,
               {{"decomposition", decomposition_to_json(d)}});
  }
  return report;
}

SetSpec product_union_small(std::size_t N, unsigned n) {
  std::vector<std::vector<std::int64_t>> allowed(N);
  for (std::size_t k = 1; k <= N; ++k) {
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(k); ++v) {
      allowed[k - 1].push_back(v);
    }
  }
  for (std::size_t m = 1; m <= N; ++m) {
    SetSpec b = n_fold_star(product_set(N, m), n);
    const auto& bs = *b.as<BoxSet>();
    for (std::size_t k = 1; k <= bs.allowed.size(); ++k) {
      std::vector<std::int64_t> keep;
      std::set_intersection(allowed[k - 1].begin(), allowed[k - 1].end(), bs.allowed[k - 1].begin(),
                            bs.allowed[k - 1].end(), std::back_inserter(keep));
      allowed[k - 1] = std::move(keep);
    }
  }
  return SetSpec::box(N, std::move(allowed));
}

SetSpec small_residue_box(std::size_t N, unsigned n) {
  std::vector<std::vector<std::int64_t>> allowed(N);
  for (std::size_t k = 1; k <= N; ++k) {
    auto kk = static_cast<std::int64_t>(k);
    for (std::int64_t v = -static_cast<std::int64_t>(n); v <= static_cast<std::int64_t>(n); ++v) {
      allowed[k - 1].push_back(((v % kk) + kk) % kk);
    }
  }
  return SetSpec::box(N, std::move(allowed));
}

VerificationReport verify_product_union_small(std::size_t N, unsigned n) {
  if (N < 1 || n < 1) {
    throw PreconditionError("verify_product_union_small needs N, n >= 1");
  }
  VerificationReport report("product.union_small");
  std::string base = "product.union_small/N=" + std::to_string(N) + "/n=" + std::to_string(n);
  SetSpec inter = product_union_small(N, n);
  SetSpec small = small_residue_box(N, n);
  bool equal = set_equal(inter, small);
  report.add(base + "/equals-small-residues", equal ? Status::verified : Status::refuted,
             {{"intersection", setspec_to_json(inter)}, {"small_residues", setspec_to_json(small)}});

  const auto& sb = *small.as<BoxSet>();
  std::optional<ResidueVector> outside;
  for (std::size_t k = 1; k <= N && !outside; ++k) {
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(k); ++v) {
      if (!std::binary_search(sb.allowed[k - 1].begin(), sb.allowed[k - 1].end(), v)) {
        ResidueVector e{std::vector<std::int64_t>(N, 0)};
        e.coords[k - 1] = v;
        outside = e;
        break;
      }
    }
  }
  if (outside && !inter.contains(*outside)) {
    report.add(base + "/proper", Status::verified,
               {{"outside", format_vector(*outside)}, {"truncation_artifact", false}});
  } else {
    // Every residue of every kept coordinate is small: the truncation hides
    // the coordinates that witness properness in the full product.
    report.add(base + "/proper", Status::unknown, {{"truncation_artifact", true}});
  }
  return report;
}

VerificationReport verify_interval_example(unsigned steps) {
  VerificationReport report("interval");
  Group q = Group::rationals();
  Element g = Rational(1);
  SetSpec s0 = SetSpec::interval(1);
  bool outside = !star(s0).contains(g) && prefix_sum_membership(g, {s0}).truth == Truth::no;
  report.add("interval/g-not-in-S0", outside ? Status::verified : Status::refuted,
             {{"g", "1"}, {"S0", setspec_to_json(s0)}, {"exclusion", exclusion_to_json(q, g, {s0})}});
  Rational eps = 1;
  for (unsigned i = 0; i <= steps; ++i) {
    SetSpec s1 = SetSpec::interval(eps);
    Rational half = eps / 2;
    half.canonicalize();
    Rational rest = Rational(1) - half;
    rest.canonicalize();
    Decomposition d{q, g, {Element(rest), Element(half)}, {s0, s1}};
    Membership m = prefix_sum_membership(g, {s0, s1});
    bool ok = recheck(d) && m.truth == Truth::yes;
    char id[32];
    std::snprintf(id, sizeof id, "interval/eps=2^-%02u", i);
    report.add(id, ok ? Status::verified : Status::refuted,
               {{"epsilon", eps.get_str()}, {"decomposition", decomposition_to_json(d)}});
    eps /= 2;
  }
  return report;
}

}  // namespace gtop
