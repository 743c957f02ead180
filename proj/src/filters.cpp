#include "gtop/filters.hpp"

#include <algorithm>
#include <map>

#include "gtop/codec.hpp"
#include "gtop/counterexamples.hpp"
#include "gtop/error.hpp"
#include "gtop/hensel.hpp"

namespace gtop {

FilterFamily FilterFamily::sqrt7(const Int& p, const Int& a) {
  Chain c;
  c.generator = "sqrt7";
  c.params = {{"p", int_to_json(p)}, {"a", int_to_json(a)}};
  c.make = [p, a](std::size_t k) { return sqrt_set(static_cast<unsigned>(k), p, a); };
  c.first = 1;
  c.stable_prime = p;
  // Fail early on bad parameters.
  c.make(1);
  return FilterFamily(std::move(c));
}

FilterFamily FilterFamily::product(std::size_t N) {
  if (N == 0) {
    throw PreconditionError("product family needs N >= 1");
  }
  Chain c;
  c.generator = "product";
  c.params = {{"N", N}};
  c.make = [N](std::size_t m) { return product_set(N, m); };
  c.first = 1;
  c.last = N;
  return FilterFamily(std::move(c));
}

FilterFamily FilterFamily::intervals() {
  Chain c;
  c.generator = "interval";
  c.make = [](std::size_t k) {
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(k);
    return SetSpec::interval(Rational(mpz_class(1), den));
  };
  c.first = 0;
  return FilterFamily(std::move(c));
}

FilterFamily FilterFamily::repeat(SetSpec s) {
  Chain c;
  c.generator = "repeat";
  c.params = {{"set", setspec_to_json(s)}};
  c.make = [s](std::size_t) { return s; };
  c.first = 0;
  c.last = 0;
  return FilterFamily(std::move(c));
}

FilterFamily FilterFamily::chain(std::string name, std::function<SetSpec(std::size_t)> make, std::size_t first,
                                 std::optional<std::size_t> last) {
  if (last && *last < first) {
    throw PreconditionError("chain has no members");
  }
  Chain c;
  c.generator = std::move(name);
  c.make = std::move(make);
  c.first = first;
  c.last = last;
  return FilterFamily(std::move(c));
}

FilterFamily FilterFamily::cofinite(SequencePtr sequence) {
  if (!sequence) {
    throw PreconditionError("cofinite family needs a sequence");
  }
  return FilterFamily(Cofinite{std::move(sequence)});
}

FilterFamily FilterFamily::explicit_list(std::vector<SetSpec> sets) {
  if (sets.empty()) {
    throw PreconditionError("explicit family needs at least one set");
  }
  for (const auto& s : sets) {
    if (!(s.group() == sets.front().group())) {
      throw GroupMismatch("explicit family mixes groups");
    }
  }
  return FilterFamily(Explicit{std::move(sets)});
}

Group FilterFamily::group() const { return member(0).set.group(); }

std::optional<std::size_t> FilterFamily::size() const {
  if (auto c = as<Chain>()) {
    if (c->last) {
      return *c->last - c->first + 1;
    }
    return std::nullopt;
  }
  if (auto c = as<Cofinite>()) {
    return c->sequence->length();
  }
  return as<Explicit>()->sets.size();
}

Member FilterFamily::member(std::size_t position) const {
  if (auto n = size(); n && position >= *n) {
    throw PreconditionError("family has only " + std::to_string(*n) + " members");
  }
  if (auto c = as<Chain>()) {
    std::size_t level = c->first + position;
    std::string label = c->generator == "repeat" ? "S" : "S(" + std::to_string(level) + ")";
    return {label, c->make(level), position};
  }
  if (auto c = as<Cofinite>()) {
    return {"tail(" + std::to_string(position) + ")", SetSpec::tail(c->sequence, position), position};
  }
  const auto& sets = as<Explicit>()->sets;
  return {"F[" + std::to_string(position) + "]", sets[position], position};
}

std::vector<Member> FilterFamily::first(std::size_t depth) const {
  if (auto n = size()) {
    depth = std::min(depth, *n);
  }
  std::vector<Member> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    out.push_back(member(i));
  }
  return out;
}

std::string FilterFamily::describe() const {
  if (auto c = as<Chain>()) {
    std::string s = "chain " + c->generator;
    if (!c->params.empty() && c->generator != "repeat") {
      s += c->params.dump();
    }
    return s;
  }
  if (auto c = as<Cofinite>()) {
    return "cofinite " + c->sequence->id();
  }
  return "explicit(" + std::to_string(as<Explicit>()->sets.size()) + ")";
}

json FilterFamily::to_json() const {
  if (auto c = as<Chain>()) {
    json j = {{"kind", "chain"}, {"generator", c->generator}};
    for (auto it = c->params.begin(); it != c->params.end(); ++it) {
      j[it.key()] = it.value();
    }
    return j;
  }
  if (auto c = as<Cofinite>()) {
    return {{"kind", "cofinite"}, {"sequence", c->sequence->id()}};
  }
  json sets = json::array();
  for (const auto& s : as<Explicit>()->sets) {
    sets.push_back(setspec_to_json(s));
  }
  return {{"kind", "explicit"}, {"group", group_to_json(group())}, {"sets", sets}};
}

FilterFamily family_from_json(const json& j, const Group* context, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ParseError("expected an object with \"kind\"", where);
  }
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "chain") {
    std::string gen = j.value("generator", "");
    if (gen == "sqrt7") {
      Int p = j.contains("p") ? int_from_json(j.at("p"), where + ".p") : Int(3);
      Int a = j.contains("a") ? int_from_json(j.at("a"), where + ".a") : Int(7);
      return FilterFamily::sqrt7(p, a);
    }
    if (gen == "product") {
      if (!j.contains("N") || !j.at("N").is_number_unsigned()) {
        throw ParseError("product chain needs a positive \"N\"", where);
      }
      return FilterFamily::product(j.at("N").get<std::size_t>());
    }
    if (gen == "interval") {
      return FilterFamily::intervals();
    }
    if (gen == "repeat") {
      if (!j.contains("set")) {
        throw ParseError("repeat chain needs \"set\"", where);
      }
      return FilterFamily::repeat(setspec_from_json(j.at("set"), context, where + ".set"));
    }
    throw ParseError("unknown chain generator \"" + gen + "\"", where + ".generator");
  }
  if (kind == "cofinite") {
    if (!j.contains("sequence") || !j.at("sequence").is_string()) {
      throw ParseError("cofinite family needs a \"sequence\" id", where);
    }
    return FilterFamily::cofinite(SequenceRegistry::global().get(j.at("sequence").get<std::string>()));
  }
  if (kind == "explicit") {
    std::optional<Group> g;
    if (j.contains("group")) {
      g = group_from_json(j.at("group"), where + ".group");
    }
    const Group* ctx = g ? &*g : context;
    if (!j.contains("sets") || !j.at("sets").is_array()) {
      throw ParseError("explicit family needs a \"sets\" array", where);
    }
    std::vector<SetSpec> sets;
    for (std::size_t i = 0; i < j.at("sets").size(); ++i) {
      sets.push_back(setspec_from_json(j.at("sets")[i], ctx, where + ".sets[" + std::to_string(i) + "]"));
    }
    return FilterFamily::explicit_list(std::move(sets));
  }
  throw ParseError("unknown family kind \"" + kind + "\"", where + ".kind");
}

DirectedResult check_directed(const FilterFamily& f) {
  const auto* e = f.as<FilterFamily::Explicit>();
  if (!e) {
    throw PreconditionError("directedness is only checked for explicit families");
  }
  const auto& sets = e->sets;
  std::size_t n = sets.size();
  std::vector<std::vector<char>> sub(n, std::vector<char>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      sub[a][b] = is_subset(sets[a], sets[b]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool found = false;
      for (std::size_t k = 0; k < n && !found; ++k) {
        found = sub[k][i] && sub[k][j];
      }
      if (!found) {
        return {false, std::pair{i, j}};
      }
    }
  }
  return {true, std::nullopt};
}

bool check_chain_decreasing(const FilterFamily& f, std::size_t depth) {
  auto ms = f.first(depth);
  for (std::size_t k = 0; k + 1 < ms.size(); ++k) {
    if (!is_subset(ms[k + 1].set, ms[k].set)) {
      return false;
    }
  }
  return true;
}

Member lower_bound(const FilterFamily& f, const Member& a, const Member& b) {
  if (f.as<FilterFamily::Chain>()) {
    return a.position >= b.position ? a : b;
  }
  if (auto c = f.as<FilterFamily::Cofinite>()) {
    const auto* ta = a.set.as<TailSet>();
    const auto* tb = b.set.as<TailSet>();
    if (!ta || !tb || ta->sequence->id() != c->sequence->id() || tb->sequence->id() != c->sequence->id()) {
      throw PreconditionError("cofinite lower bound needs tails of the family sequence");
    }
    std::size_t start = std::max(ta->start, tb->start);
    std::set<std::size_t> excluded;
    for (const auto* t : {ta, tb}) {
      for (std::size_t k : t->excluded) {
        if (k >= start) {
          excluded.insert(k);
        }
      }
    }
    std::string label = "tail(" + std::to_string(start);
    if (!excluded.empty()) {
      label += " minus {";
      bool sep = false;
      for (std::size_t k : excluded) {
        label += (sep ? "," : "") + std::to_string(k);
        sep = true;
      }
      label += "}";
    }
    label += ")";
    return {label, SetSpec::tail(c->sequence, start, std::move(excluded)), start};
  }
  const auto& sets = f.as<FilterFamily::Explicit>()->sets;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (is_subset(sets[k], a.set) && is_subset(sets[k], b.set)) {
      return f.member(k);
    }
  }
  throw PreconditionError("no member lies below both " + a.label + " and " + b.label);
}

CupcapResult cupcap_check(const Element& g, unsigned n, const FilterFamily& f, std::size_t depth,
                          const SearchBudget& budget) {
  if (n == 0) {
    throw PreconditionError("cupcap check needs n >= 1");
  }
  CupcapResult out;
  auto n_members = f.size();
  for (std::size_t pos = 0; pos < depth && (!n_members || pos < *n_members); ++pos) {
    Member m = f.member(pos);
    ++out.scanned;
    Membership r;
    try {
      r = prefix_sum_membership(g, std::vector<SetSpec>(n, m.set), budget);
    } catch (const BudgetExceeded& e) {
      r.truth = Truth::unknown;
      r.proof = std::string("budget: ") + e.what();
    }
    if (r.truth == Truth::no) {
      out.found = true;
      out.member = std::move(m);
      out.proof = std::move(r);
      return out;
    }
    if (r.truth == Truth::unknown) {
      ++out.unknown;
    }
  }
  return out;
}

ConvergenceResult strong_convergence_check(const FilterFamily& f, const IndexedPoints& pts, const Element& x,
                                           std::size_t depth, std::size_t margin) {
  const std::size_t L = pts.points.size();
  if (L == 0) {
    throw PreconditionError("no sample points");
  }
  if (margin == 0) {
    margin = std::max<std::size_t>(1, L / 4);
  }
  if (margin > L) {
    throw PreconditionError("margin exceeds the number of samples");
  }
  Group grp = f.group();
  grp.check(x);
  ConvergenceResult out;
  Status status = Status::verified;
  for (const Member& m : f.first(depth)) {
    StarSet st = star(m.set);
    std::vector<std::size_t> bad;
    for (std::size_t p = 0; p < L; ++p) {
      if (!st.contains(grp.sub(pts.points[p], x))) {
        bad.push_back(p);
      }
    }
    std::size_t clean_from = bad.empty() ? 0 : bad.back() + 1;
    Status s;
    if (L - clean_from >= margin) {
      s = Status::verified;
    } else {
      // Violations in every window of `margin` samples over the second half.
      bool cofinal = true;
      for (std::size_t w = L / 2; w + margin <= L && cofinal; ++w) {
        auto it = std::lower_bound(bad.begin(), bad.end(), w);
        cofinal = it != bad.end() && *it < w + margin;
      }
      s = cofinal ? Status::refuted : Status::unknown;
    }
    status = combine(status, s);
    out.detail.push_back({{"member", m.label}, {"violations", bad.size()}, {"clean_from", clean_from},
                          {"status", to_string(s)}});
  }
  out.status = status;
  return out;
}

SelectorResult frequent_value_selector(const SetSpec& s, const IndexedPoints& pts, std::size_t window) {
  if (window == 0) {
    throw PreconditionError("window must be positive");
  }
  const Group& grp = s.group();
  StarSet st = star(s);
  const std::size_t L = pts.points.size();
  std::vector<Element> values;
  std::vector<std::vector<std::size_t>> where;
  for (std::size_t p = 0; p < L; ++p) {
    const Element& v = pts.points[p];
    if (!st.contains(v)) {
      throw PreconditionError("point " + grp.format(v) + " is outside " + st.describe());
    }
    auto it = std::find(values.begin(), values.end(), v);
    if (it == values.end()) {
      values.push_back(v);
      where.push_back({p});
    } else {
      where[static_cast<std::size_t>(it - values.begin())].push_back(p);
    }
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& ps = where[i];
    bool frequent = L >= window && ps.front() < window && ps.back() + window >= L;
    for (std::size_t k = 1; k < ps.size() && frequent; ++k) {
      frequent = ps[k] - ps[k - 1] <= window;
    }
    if (frequent && (!best || ps.size() > where[*best].size())) {
      best = i;
    }
  }
  SelectorResult out;
  if (best) {
    out.value = values[*best];
    out.positions = where[*best];
    return out;
  }
  out.fallback = true;
  out.value = grp.identity();
  out.positions.resize(L);
  for (std::size_t p = 0; p < L; ++p) {
    out.positions[p] = p;
  }
  return out;
}

namespace {

Membership decide(const Element& g, const std::vector<SetSpec>& sets, const SearchBudget& budget) {
  try {
    return prefix_sum_membership(g, sets, budget);
  } catch (const BudgetExceeded& e) {
    return {Truth::unknown, std::nullopt, std::string("budget: ") + e.what()};
  }
}

// Stuck proofs for projection-stable residue chains: membership of g in
// P + S(k)*, with P a union of classes modulo G, depends only on the image of
// S(k) modulo G. Every S(k) with p^k >= G has the same image, so one exact
// "yes" at such a member covers every deeper member.
bool stuck_is_exhaustive(const FilterFamily& f, const Stuck& st, std::size_t scanned) {
  const auto* c = f.as<FilterFamily::Chain>();
  if (!c || !c->stable_prime || st.blocking.size() != scanned) {
    return false;
  }
  if (auto n = f.size(); n && scanned >= *n) {
    return std::all_of(st.blocking.begin(), st.blocking.end(),
                       [](const auto& b) { return b.second.truth == Truth::yes; });
  }
  Int G = 1;
  for (const Member& m : st.prefix) {
    const auto* r = m.set.as<ResidueSet>();
    if (!r || !star(m.set).closed()) {
      return false;
    }
    G = lcm(G, r->modulus);
  }
  std::optional<std::vector<Int>> image;
  for (const auto& [m, proof] : st.blocking) {
    if (proof.truth != Truth::yes) {
      return false;
    }
    const auto* r = m.set.as<ResidueSet>();
    if (!r || !divides(G, r->modulus)) {
      continue;
    }
    std::vector<Int> img;
    for (const Int& v : r->residues) {
      img.push_back(mod(v, G));
    }
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    if (image && *image != img) {
      return false;
    }
    image = std::move(img);
  }
  return image.has_value();
}

}  // namespace

SeparationResult separating_sequence(const Element& g, const FilterFamily& f, std::size_t max_len,
                                     std::size_t depth, const SearchBudget& budget) {
  Group grp = f.group();
  grp.check(g);
  if (grp.is_identity(g)) {
    throw PreconditionError("the identity cannot be separated");
  }
  SeparationCertificate cert;
  cert.target = g;
  std::vector<Member> candidates = f.first(depth);
  if (candidates.empty()) {
    throw PreconditionError("depth must be positive");
  }
  std::vector<SetSpec> sets;
  for (std::size_t step = 0; step < max_len; ++step) {
    Stuck st;
    st.prefix = cert.members;
    st.step = step;
    bool advanced = false;
    sets.push_back(candidates.front().set);
    for (const Member& m : candidates) {
      sets.back() = m.set;
      Membership r = decide(g, sets, budget);
      if (r.truth == Truth::no) {
        cert.members.push_back(m);
        cert.proofs.push_back(std::move(r));
        advanced = true;
        break;
      }
      st.blocking.emplace_back(m, std::move(r));
    }
    if (!advanced) {
      st.exhaustive = stuck_is_exhaustive(f, st, candidates.size());
      bool any_unknown = std::any_of(st.blocking.begin(), st.blocking.end(),
                                     [](const auto& b) { return b.second.truth == Truth::unknown; });
      st.reason = st.exhaustive    ? "every member blocks"
                  : any_unknown    ? "some memberships undecided within budget"
                                   : "every scanned member blocks";
      return {std::nullopt, std::move(st)};
    }
  }
  return {std::move(cert), std::nullopt};
}

bool recheck_certificate(const SeparationCertificate& cert, const SearchBudget& budget) {
  if (cert.members.empty()) {
    return false;
  }
  std::vector<SetSpec> sets;
  for (const Member& m : cert.members) {
    sets.push_back(m.set);
    if (prefix_sum_membership(cert.target, sets, budget).truth != Truth::no) {
      return false;
    }
  }
  return true;
}

VerificationReport hausdorff_verdict(const FilterFamily& f, const std::vector<Element>& probes,
                                     const HausdorffBudgets& budgets) {
  VerificationReport report("hausdorff " + f.describe());
  Group grp = f.group();
  report.budgets() = {{"n_max", budgets.n_max},
                      {"depth", budgets.depth},
                      {"max_len", budgets.max_len},
                      {"max_states", budgets.search.max_states},
                      {"candidates_per_set", budgets.search.candidates_per_set},
                      {"max_nodes", budgets.search.max_nodes}};
  bool cupcap_all = true;
  bool any_stuck = false;
  bool any_unknown = false;
  for (const Element& g : probes) {
    grp.check(g);
    if (grp.is_identity(g)) {
      throw PreconditionError("probes must differ from the identity");
    }
    std::string gs = grp.format(g);
    for (unsigned n = 1; n <= budgets.n_max; ++n) {
      CupcapResult r = cupcap_check(g, n, f, budgets.depth, budgets.search);
      std::string id = "cupcap/g=" + gs + "/n=" + std::to_string(n);
      if (r.found) {
        std::vector<SetSpec> sets(n, r.member->set);
        report.add(id, Status::verified,
                   {{"member", r.member->label}, {"proof", r.proof.proof}, {"exclusion", exclusion_to_json(grp, g, sets)}});
      } else {
        cupcap_all = false;
        report.add(id, Status::unknown, {{"scanned", r.scanned}, {"undecided", r.unknown}});
      }
    }
    SeparationResult sep = separating_sequence(g, f, budgets.max_len, budgets.depth, budgets.search);
    std::string id = "separation/g=" + gs;
    if (sep.certificate) {
      const auto& cert = *sep.certificate;
      json steps = json::array();
      std::vector<SetSpec> sets;
      for (std::size_t i = 0; i < cert.members.size(); ++i) {
        sets.push_back(cert.members[i].set);
        steps.push_back({{"member", cert.members[i].label},
                         {"proof", cert.proofs[i].proof},
                         {"exclusion", exclusion_to_json(grp, g, sets)}});
      }
      bool ok = recheck_certificate(cert, budgets.search);
      report.add(id, ok ? Status::verified : Status::unknown, {{"length", cert.members.size()}, {"steps", steps}});
      if (!ok) {
        any_unknown = true;
      }
    } else {
      const Stuck& st = *sep.stuck;
      json prefix = json::array();
      for (const Member& m : st.prefix) {
        prefix.push_back(m.label);
      }
      json blocking = json::array();
      for (const auto& [m, proof] : st.blocking) {
        json b = {{"member", m.label}, {"truth", to_string(proof.truth)}, {"proof", proof.proof}};
        if (proof.witness) {
          b["decomposition"] = decomposition_to_json(*proof.witness);
        }
        blocking.push_back(std::move(b));
      }
      Status s = st.exhaustive ? Status::refuted : Status::unknown;
      if (st.exhaustive) {
        any_stuck = true;
      } else {
        any_unknown = true;
      }
      report.add(id, s,
                 {{"stuck_at", st.step},
                  {"prefix", prefix},
                  {"blocking", blocking},
                  {"exhaustive", st.exhaustive},
                  {"reason", st.reason}});
    }
  }
  std::string verdict;
  if (cupcap_all && any_stuck) {
    verdict = "necessary-holds/construction-sticks";
  } else if (cupcap_all && !any_stuck && !any_unknown) {
    verdict = "consistent-with-hausdorff";
  } else {
    verdict = "inconclusive";
  }
  report.summary() = {{"verdict", verdict}, {"family", f.to_json()}, {"probes", probes.size()}};
  return report;
}

}  // namespace gtop
