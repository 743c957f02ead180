#include "gtop/nonabelian.hpp"

#include <algorithm>
#include <set>

#include "gtop/codec.hpp"
#include "gtop/error.hpp"

namespace gtop {

DyadicIndex::DyadicIndex(std::uint64_t m, unsigned level) : m_(m), level_(level) {
  if (level == 0 || level > 62 || m == 0 || m >= (std::uint64_t{1} << level)) {
    throw PreconditionError("dyadic index needs 0 < m < 2^level, 1 <= level <= 62");
  }
  while (m_ % 2 == 0) {
    m_ /= 2;
    --level_;
  }
}

DyadicIndex DyadicIndex::mirror() const { return DyadicIndex((std::uint64_t{1} << level_) - m_, level_); }

std::string DyadicIndex::str() const { return std::to_string(m_) + "/" + std::to_string(std::uint64_t{1} << level_); }

std::strong_ordering operator<=>(const DyadicIndex& a, const DyadicIndex& b) {
  // a.m / 2^a.level vs b.m / 2^b.level, compared at the common level.
  unsigned top = std::max(a.level_, b.level_);
  unsigned __int128 x = static_cast<unsigned __int128>(a.m_) << (top - a.level_);
  unsigned __int128 y = static_cast<unsigned __int128>(b.m_) << (top - b.level_);
  return x <=> y;
}

std::vector<DyadicIndex> dyadic_indices(unsigned K) {
  if (K > 20) {
    throw PreconditionError("dyadic level too large to materialize");
  }
  std::vector<DyadicIndex> out;
  if (K == 0) {
    return out;
  }
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << K); ++m) {
    out.emplace_back(m, K);
  }
  return out;
}

DyadicAssignment::DyadicAssignment(std::map<unsigned, SetSpec> levels) : levels_(std::move(levels)) {
  levels_.erase(0);
  if (levels_.empty()) {
    throw PreconditionError("assignment needs level 1");
  }
  K_ = levels_.rbegin()->first;
  for (unsigned i = 1; i <= K_; ++i) {
    auto it = levels_.find(i);
    if (it == levels_.end()) {
      throw PreconditionError("assignment is missing level " + std::to_string(i));
    }
    if (!(it->second.group() == levels_.begin()->second.group())) {
      throw GroupMismatch("assignment levels live in different groups");
    }
  }
}

const SetSpec& DyadicAssignment::level(unsigned i) const {
  auto it = levels_.find(i);
  if (it == levels_.end()) {
    throw PreconditionError("no set at level " + std::to_string(i));
  }
  return it->second;
}

namespace {

SetSpec triple(const SetSpec& t) { return sumset(sumset(t, t), t); }

}  // namespace

TowerChain::TowerChain(std::vector<SetSpec> sets) : sets_(std::move(sets)) {
  if (sets_.empty()) {
    throw PreconditionError("tower needs T_0");
  }
  for (std::size_t i = 1; i < sets_.size(); ++i) {
    if (!(sets_[i].group() == sets_[0].group())) {
      throw GroupMismatch("tower levels live in different groups");
    }
    if (!is_subset(sets_[i], sets_[i - 1])) {
      throw PreconditionError("tower: T_" + std::to_string(i) + " is not inside T_" + std::to_string(i - 1));
    }
    if (!is_subset(triple(sets_[i]), sets_[i - 1])) {
      throw PreconditionError("tower: T_" + std::to_string(i) + "^3 is not inside T_" + std::to_string(i - 1));
    }
  }
}

DyadicAssignment TowerChain::assignment() const {
  if (K() == 0) {
    throw PreconditionError("tower has no level 1");
  }
  std::map<unsigned, SetSpec> levels;
  for (unsigned i = 1; i <= K(); ++i) {
    levels.emplace(i, sets_[i]);
  }
  return DyadicAssignment(std::move(levels));
}

bool recheck_uq(const Element& g, const DyadicAssignment& a, const UQWitness& w) {
  const Group& grp = a.group();
  if (w.indices.size() != w.factors.size()) {
    return false;
  }
  Element acc = grp.identity();
  for (std::size_t i = 0; i < w.indices.size(); ++i) {
    if (i > 0 && !(w.indices[i - 1] < w.indices[i])) {
      return false;
    }
    if (w.indices[i].level() > a.K() || !grp.owns(w.factors[i]) || !star(a.at(w.indices[i])).contains(w.factors[i])) {
      return false;
    }
    acc = grp.add(acc, w.factors[i]);
  }
  return acc == g;
}

UQEnumeration enumerate_uq(const DyadicAssignment& a, std::size_t depth, std::optional<DyadicIndex> above,
                           std::size_t max_elements) {
  const Group& grp = a.group();
  std::vector<DyadicIndex> idx;
  for (const auto& q : dyadic_indices(a.K())) {
    if (!above || *above < q) {
      idx.push_back(q);
    }
  }
  std::map<unsigned, std::vector<Element>> stars;
  for (const auto& [lvl, s] : a.levels()) {
    std::vector<Element> es;
    for (auto& e : star(s).enumerate()) {
      if (!grp.is_identity(e)) {
        es.push_back(std::move(e));
      }
    }
    stars.emplace(lvl, std::move(es));
  }
  using Layer = std::vector<std::map<Element, UQWitness>>;
  const std::size_t M = idx.size();
  // E[p]: products of at most l factors with indices among the first p.
  Layer prev(M + 1, std::map<Element, UQWitness>{{grp.identity(), UQWitness{}}});
  UQEnumeration out;
  if (M == 0) {
    out.elements = prev[0];
    out.complete = true;
    return out;
  }
  for (std::size_t l = 1; l <= depth; ++l) {
    Layer cur(M + 1);
    cur[0] = prev[0];
    for (std::size_t p = 0; p < M; ++p) {
      cur[p + 1] = cur[p];
      for (const auto& [e, w] : prev[p]) {
        for (const Element& s : stars.at(idx[p].level())) {
          Element x = grp.add(e, s);
          if (cur[p + 1].count(x)) {
            continue;
          }
          UQWitness nw = w;
          nw.indices.push_back(idx[p]);
          nw.factors.push_back(s);
          cur[p + 1].emplace(std::move(x), std::move(nw));
        }
      }
      if (cur[p + 1].size() > max_elements) {
        throw BudgetExceeded("U-set enumeration exceeds " + std::to_string(max_elements) + " elements");
      }
    }
    bool same = true;
    for (std::size_t p = 0; p <= M && same; ++p) {
      same = cur[p].size() == prev[p].size();
    }
    prev = std::move(cur);
    if (same || l >= M) {
      out.complete = true;
      break;
    }
  }
  out.elements = std::move(prev[M]);
  return out;
}

UQMembership uq_membership(const Element& g, const DyadicAssignment& a, std::size_t depth) {
  const Group& grp = a.group();
  grp.check(g);
  if (grp.is_identity(g)) {
    return {Truth::yes, UQWitness{}, "identity"};
  }
  try {
    UQEnumeration en = enumerate_uq(a, depth);
    auto it = en.elements.find(g);
    if (it != en.elements.end()) {
      return {Truth::yes, it->second, "product-enumeration"};
    }
    if (en.complete) {
      return {Truth::no, std::nullopt, "closure-stabilized"};
    }
    return {Truth::unknown, std::nullopt, "bounded-exhaustion"};
  } catch (const BudgetExceeded& e) {
    return {Truth::unknown, std::nullopt, std::string("budget: ") + e.what()};
  }
}

DyadicIndex DyadicEmbedding::apply(const DyadicIndex& q) const {
  unsigned level = q.level() + shift;
  if (level > 62) {
    throw PreconditionError("embedded level too large");
  }
  return DyadicIndex(q.numerator() + (offset << q.level()), level);
}

std::string DyadicEmbedding::describe() const {
  return "q -> (q + " + std::to_string(offset) + ") / 2^" + std::to_string(shift);
}

std::optional<DyadicAssignment> pull_back(const DyadicAssignment& a, const DyadicEmbedding& e) {
  if (e.shift >= a.K()) {
    return std::nullopt;
  }
  std::map<unsigned, SetSpec> levels;
  for (unsigned i = 1; i + e.shift <= a.K(); ++i) {
    levels.emplace(i, a.level(i + e.shift));
  }
  return DyadicAssignment(std::move(levels));
}

namespace {

void check_embedding(const DyadicEmbedding& e) {
  if (e.shift > 40 || e.offset >= (std::uint64_t{1} << e.shift)) {
    throw PreconditionError("embedding " + e.describe() + " does not map (0,1) into itself");
  }
}

UQEnumeration enumerate_or_identity(const std::optional<DyadicAssignment>& a, const Group& grp, std::size_t depth) {
  if (a) {
    return enumerate_uq(*a, depth);
  }
  UQEnumeration out;
  out.elements.emplace(grp.identity(), UQWitness{});
  out.complete = true;
  return out;
}

UQWitness concat(const UQWitness& x, const UQWitness& y) {
  UQWitness w = x;
  w.indices.insert(w.indices.end(), y.indices.begin(), y.indices.end());
  w.factors.insert(w.factors.end(), y.factors.begin(), y.factors.end());
  return w;
}

UQWitness map_witness(const UQWitness& w, const DyadicEmbedding& e) {
  UQWitness out = w;
  for (auto& q : out.indices) {
    q = e.apply(q);
  }
  return out;
}

}  // namespace

VerificationReport check_UU(const DyadicAssignment& a, const DyadicEmbedding& sigma, const DyadicEmbedding& tau,
                            std::size_t depth) {
  check_embedding(sigma);
  check_embedding(tau);
  // sup sigma = (offset+1)/2^shift must not exceed inf tau = offset/2^shift.
  unsigned __int128 lhs = static_cast<unsigned __int128>(sigma.offset + 1) << tau.shift;
  unsigned __int128 rhs = static_cast<unsigned __int128>(tau.offset) << sigma.shift;
  if (lhs > rhs) {
    throw PreconditionError("sigma's image must lie below tau's: " + sigma.describe() + ", " + tau.describe());
  }
  const Group& grp = a.group();
  VerificationReport report("UU");
  report.budgets() = {{"depth", depth}, {"K", a.K()}};
  report.add("UU/separation", Status::verified, {{"sigma", sigma.describe()}, {"tau", tau.describe()}});
  UQEnumeration us = enumerate_or_identity(pull_back(a, sigma), grp, depth);
  UQEnumeration ut = enumerate_or_identity(pull_back(a, tau), grp, depth);
  std::size_t pairs = 0;
  json failure;
  for (const auto& [x, wx] : us.elements) {
    for (const auto& [y, wy] : ut.elements) {
      ++pairs;
      Element xy = grp.add(x, y);
      UQWitness w = concat(map_witness(wx, sigma), map_witness(wy, tau));
      if (!recheck_uq(xy, a, w) && failure.is_null()) {
        failure = {{"x", grp.format(x)}, {"y", grp.format(y)}};
      }
    }
  }
  report.add("UU/products", failure.is_null() ? Status::verified : Status::refuted,
             {{"left", us.elements.size()}, {"right", ut.elements.size()}, {"pairs", pairs},
              {"counterexample", failure}});
  return report;
}

VerificationReport check_translation(const DyadicAssignment& a, std::size_t depth) {
  const Group& grp = a.group();
  VerificationReport report("translation");
  report.budgets() = {{"depth", depth}, {"K", a.K()}};
  UQEnumeration all = enumerate_uq(a, depth);
  std::map<DyadicIndex, UQEnumeration> above;
  std::size_t pairs = 0;
  json failure;
  for (const auto& [x, wx] : all.elements) {
    const UQEnumeration* tail = &all;
    if (!wx.indices.empty()) {
      const DyadicIndex& q = wx.indices.back();
      auto it = above.find(q);
      if (it == above.end()) {
        it = above.emplace(q, enumerate_uq(a, depth, q)).first;
      }
      tail = &it->second;
    }
    for (const auto& [u, wu] : tail->elements) {
      ++pairs;
      if (!recheck_uq(grp.add(x, u), a, concat(wx, wu)) && failure.is_null()) {
        failure = {{"x", grp.format(x)}, {"u", grp.format(u)}};
      }
    }
  }
  report.add("translation/products", failure.is_null() ? Status::verified : Status::refuted,
             {{"elements", all.elements.size()}, {"pairs", pairs}, {"counterexample", failure}});
  return report;
}

VerificationReport check_inverse_closure(const DyadicAssignment& a, std::size_t depth) {
  const Group& grp = a.group();
  VerificationReport report("inverse-closure");
  report.budgets() = {{"depth", depth}, {"K", a.K()}};
  UQEnumeration all = enumerate_uq(a, depth);
  json failure;
  for (const auto& [g, w] : all.elements) {
    UQWitness r;
    for (std::size_t i = w.indices.size(); i-- > 0;) {
      r.indices.push_back(w.indices[i].mirror());
      r.factors.push_back(grp.neg(w.factors[i]));
    }
    // Mirroring preserves levels, so the order-reversed assignment is A itself.
    if (!recheck_uq(grp.neg(g), a, r) && failure.is_null()) {
      failure = {{"g", grp.format(g)}};
    }
  }
  report.add("inverse/closure", failure.is_null() ? Status::verified : Status::refuted,
             {{"elements", all.elements.size()}, {"counterexample", failure}});
  return report;
}

json ReductionCertificate::to_json() const {
  json rs = json::array();
  for (const auto& r : rounds) {
    json es = json::array();
    for (const auto& [q, t] : r.entries) {
      es.push_back({{"index", q.str()}, {"T", t}});
    }
    rs.push_back({{"level", r.level}, {"entries", es}});
  }
  json j = {{"j", this->j}, {"rounds", rs}, {"steps", steps}, {"verified", verified}};
  j["direct"] = direct ? json(*direct) : json(nullptr);
  return j;
}

ReductionCertificate s_in_u_reduce(const TowerChain& t, unsigned j) {
  const unsigned K = t.K();
  if (j < 1 || j > K + 1) {
    throw PreconditionError("reduction level must satisfy 1 <= j <= K + 1");
  }
  ReductionCertificate cert;
  cert.j = j;
  bool ok = true;
  std::map<unsigned, json> merge_facts;
  auto merge_fact = [&](unsigned i) -> const json& {
    auto it = merge_facts.find(i);
    if (it == merge_facts.end()) {
      SetSpec p = triple(t[i]);
      bool holds = is_subset(p, t[i - 1]);
      json f = {{"kind", "merge"}, {"from", i}, {"to", i - 1}, {"holds", holds}};
      try {
        f["equal"] = set_equal(p, t[i - 1]);
      } catch (const UnsupportedOperation&) {
      }
      it = merge_facts.emplace(i, std::move(f)).first;
      cert.steps.push_back(it->second);
    }
    return it->second;
  };

  ReductionRound round{j, {}};
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << j); ++m) {
    DyadicIndex q(m, j);
    round.entries.emplace_back(q, std::min(q.level(), K));
  }
  cert.rounds.push_back(round);
  // Entries of the top level carry T_{j-1} from here on.
  if (j <= K) {
    bool holds = is_subset(t[j], t[j - 1]);
    ok = ok && holds;
    cert.steps.push_back({{"kind", "promote"}, {"from", j}, {"to", j - 1}, {"holds", holds}});
  } else {
    cert.steps.push_back({{"kind", "assign"}, {"level", j}, {"T", K}});
  }
  for (auto& [q, tag] : round.entries) {
    if (q.level() == j) {
      tag = j - 1;
    }
  }
  cert.rounds.push_back(round);

  for (unsigned r = j; r >= 2; --r) {
    ReductionRound next{r - 1, {}};
    const auto& es = round.entries;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << (r - 1)); ++m) {
      std::size_t mid = static_cast<std::size_t>(2 * m - 1);
      if (m % 2 == 1) {
        bool shape = es[mid - 1].second == r - 1 && es[mid].second == r - 1 && es[mid + 1].second == r - 1;
        const json& fact = merge_fact(r - 1);
        ok = ok && shape && fact.at("holds").get<bool>();
        next.entries.emplace_back(es[mid].first, r - 2);
      } else {
        ok = ok && es[mid].second <= r - 2;
        next.entries.push_back(es[mid]);
      }
    }
    round = std::move(next);
    cert.rounds.push_back(round);
  }
  ok = ok && round.entries.size() == 1 && round.entries[0].first == DyadicIndex(1, 1) && round.entries[0].second == 0;
  cert.verified = ok;

  try {
    const auto& first = cert.rounds.front().entries;
    SetSpec acc = t[first[0].second];
    for (std::size_t i = 1; i < first.size(); ++i) {
      acc = sumset(acc, t[first[i].second]);
    }
    cert.direct = is_subset(acc, t[0]);
  } catch (const UnsupportedOperation&) {
  } catch (const BudgetExceeded&) {
  }
  return cert;
}

ConjugationClosure fg_closure(const std::vector<SetSpec>& family, const std::vector<Element>& conjugators) {
  if (family.empty()) {
    throw PreconditionError("empty family");
  }
  const Group& grp = family.front().group();
  if (conjugators.empty() ||
      std::none_of(conjugators.begin(), conjugators.end(), [&](const Element& c) { return grp.is_identity(c); })) {
    throw PreconditionError("conjugators must include the identity");
  }
  for (const auto& c : conjugators) {
    grp.check(c);
  }
  ConjugationClosure out;
  for (const SetSpec& s : family) {
    if (!(s.group() == grp)) {
      throw GroupMismatch("family mixes groups");
    }
    if (grp.is_abelian()) {
      out.members.push_back(s);
      continue;
    }
    const auto* f = s.as<FiniteSet>();
    if (!f) {
      throw UnsupportedOperation("conjugation closure needs finite sets, got " + s.describe());
    }
    std::vector<Element> es;
    for (const Element& c : conjugators) {
      for (const Element& x : f->elements) {
        es.push_back(grp.conjugate(c, x));
      }
    }
    SetSpec closed = SetSpec::finite(grp, std::move(es));
    out.contains_original = out.contains_original && is_subset(s, closed);
    out.members.push_back(std::move(closed));
  }
  return out;
}

ConjugationClosure fg_closure_all(const std::vector<SetSpec>& family) {
  if (family.empty()) {
    throw PreconditionError("empty family");
  }
  return fg_closure(family, family.front().group().elements());
}

CupcapResult cupcap_check_nonab(const Element& g, unsigned n, const std::vector<SetSpec>& family,
                                std::size_t depth) {
  if (family.empty()) {
    throw PreconditionError("empty family");
  }
  const Group& grp = family.front().group();
  grp.check(g);
  if (grp.is_identity(g)) {
    throw PreconditionError("cupcap check needs g different from the identity");
  }
  FilterFamily f = FilterFamily::explicit_list(family);
  CupcapResult out;
  for (std::size_t pos = 0; pos < std::min(depth, family.size()); ++pos) {
    ++out.scanned;
    if (!n_fold_star(family[pos], n).contains(g)) {
      out.found = true;
      out.member = f.member(pos);
      out.proof = {Truth::no, std::nullopt, "product-set"};
      return out;
    }
  }
  return out;
}

std::pair<Element, Element> conjugation_identity(const Group& grp, const std::vector<Element>& g,
                                                 const std::vector<Element>& g_prime) {
  if (g.size() != g_prime.size()) {
    throw PreconditionError("conjugation identity needs equally many g and g'");
  }
  Element lhs = grp.identity();
  Element prod = grp.identity();
  Element rhs = grp.identity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    grp.check(g[i]);
    grp.check(g_prime[i]);
    lhs = grp.add(lhs, grp.add(g_prime[i], g[i]));
    // prod is h_i = g_0 ... g_{i-1} here.
    rhs = grp.add(rhs, grp.conjugate(prod, g_prime[i]));
    prod = grp.add(prod, g[i]);
  }
  lhs = grp.add(lhs, grp.neg(prod));
  return {lhs, rhs};
}

namespace {

std::map<unsigned, SetSpec> read_levels(const json& j, const Group* context, const std::string& where) {
  if (!j.is_object() || !j.contains("levels") || !j.at("levels").is_object()) {
    throw ParseError("expected {\"levels\": {...}}", where);
  }
  std::optional<Group> g;
  if (j.contains("group")) {
    g = group_from_json(j.at("group"), where + ".group");
    context = &*g;
  }
  std::map<unsigned, SetSpec> levels;
  for (auto it = j.at("levels").begin(); it != j.at("levels").end(); ++it) {
    const std::string& key = it.key();
    std::string loc = where + ".levels." + key;
    if (key.empty() || key.size() > 2 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError("level keys must be small non-negative integers", loc);
    }
    levels.emplace(static_cast<unsigned>(std::stoul(key)), setspec_from_json(it.value(), context, loc));
  }
  return levels;
}

}  // namespace

DyadicAssignment assignment_from_json(const json& j, const Group* context, const std::string& where) {
  return DyadicAssignment(read_levels(j, context, where));
}

TowerChain tower_from_json(const json& j, const Group* context, const std::string& where) {
  auto levels = read_levels(j, context, where);
  std::vector<SetSpec> sets;
  for (unsigned i = 0; i < levels.size(); ++i) {
    auto it = levels.find(i);
    if (it == levels.end()) {
      throw ParseError("tower is missing level " + std::to_string(i), where + ".levels");
    }
    sets.push_back(it->second);
  }
  return TowerChain(std::move(sets));
}

json assignment_to_json(const DyadicAssignment& a) {
  json levels = json::object();
  for (const auto& [i, s] : a.levels()) {
    levels[std::to_string(i)] = setspec_to_json(s);
  }
  return {{"group", group_to_json(a.group())}, {"levels", levels}};
}

json uq_witness_to_json(const Group& grp, const UQWitness& w) {
  Element acc = grp.identity();
  for (const auto& f : w.factors) {
    acc = grp.add(acc, f);
  }
  json j = product_witness(grp, w.factors, acc);
  json idx = json::array();
  for (const auto& q : w.indices) {
    idx.push_back(q.str());
  }
  j["indices"] = idx;
  return j;
}

}  // namespace gtop
