#include "gtop/membership.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "gtop/error.hpp"

namespace gtop {

std::string to_string(Truth t) {
  switch (t) {
    case Truth::yes: return "yes";
    case Truth::no: return "no";
    default: return "unknown";
  }
}

bool recheck(const Decomposition& d) {
  if (d.summands.size() != d.sources.size()) {
    return false;
  }
  try {
    Element acc = d.group.identity();
    for (std::size_t i = 0; i < d.summands.size(); ++i) {
      if (!(d.sources[i].group() == d.group) || !in_star(d.sources[i], d.summands[i])) {
        return false;
      }
      acc = d.group.add(acc, d.summands[i]);
    }
    return acc == d.target;
  } catch (const Error&) {
    return false;
  }
}

namespace {

using Back = std::pair<Element, Element>;  // previous value, chosen summand

struct Reach {
  std::vector<std::map<Element, Back>> layers;
};

std::optional<Reach> finite_reach(const Group& grp, const std::vector<std::vector<Element>>& lists, std::size_t cap) {
  Reach r;
  r.layers.emplace_back();
  r.layers[0].emplace(grp.identity(), Back{grp.identity(), grp.identity()});
  for (const auto& list : lists) {
    std::map<Element, Back> next;
    for (const auto& entry : r.layers.back()) {
      for (const auto& x : list) {
        next.try_emplace(grp.add(entry.first, x), Back{entry.first, x});
      }
      if (next.size() > cap) {
        return std::nullopt;
      }
    }
    r.layers.push_back(std::move(next));
  }
  return r;
}

std::vector<Element> trace(const Reach& r, Element v) {
  std::vector<Element> out(r.layers.size() - 1);
  for (std::size_t i = r.layers.size() - 1; i > 0; --i) {
    const Back& b = r.layers[i].at(v);
    out[i - 1] = b.second;
    v = b.first;
  }
  return out;
}

Group infer_group(const Element& g) {
  switch (g.index()) {
    case 0: return Group::integers();
    case 1: return Group::rationals();
    case 2: return Group::product_mod(std::get<ResidueVector>(g).coords.size());
    default: throw PreconditionError("cannot infer the ambient group for an empty chain");
  }
}

class Solver {
 public:
  Solver(const Element& g, const std::vector<SetSpec>& chain, const SearchBudget& budget)
      : g_(g), chain_(chain), budget_(budget), grp_(chain.front().group()) {}

  Membership run();

 private:
  Membership yes(std::vector<Element> summands, std::string proof) const;
  static Membership no(std::string proof) { return {Truth::no, std::nullopt, std::move(proof)}; }
  static Membership unknown(std::string why) { return {Truth::unknown, std::nullopt, std::move(why)}; }

  Membership all_finite();
  Membership residue_dp();
  Membership finite_and_tails();
  Membership boxes();
  Membership intervals();
  Membership bounded(const std::string& why);

  // Decides membership of h in the sum of the tails' stars.
  Truth decide_tails(const Int& h, std::vector<Int>& out, std::string& proof);
  Truth ratio_cutoff(const Int& h, std::vector<Int>& out);
  bool bounded_tails(const Int& h, std::vector<Int>& out);

  std::vector<std::size_t> indices_of(std::size_t body_index) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < chain_.size(); ++i) {
      if (chain_[i].body().index() == body_index) {
        out.push_back(i);
      }
    }
    return out;
  }

  const Element& g_;
  const std::vector<SetSpec>& chain_;
  SearchBudget budget_;
  Group grp_;
  std::vector<const TailSet*> tails_;
};

Membership Solver::yes(std::vector<Element> summands, std::string proof) const {
  Decomposition d{grp_, g_, std::move(summands), chain_};
  if (!recheck(d)) {
    throw std::logic_error("internal error: decomposition witness failed to re-verify (" + proof + ")");
  }
  return {Truth::yes, std::move(d), std::move(proof)};
}

Membership Solver::run() {
  for (const auto& s : chain_) {
    if (!(s.group() == grp_)) {
      throw GroupMismatch("chain mixes " + grp_.name() + " and " + s.group().name());
    }
  }
  grp_.check(g_);
  if (grp_.is_identity(g_)) {
    return yes(std::vector<Element>(chain_.size(), grp_.identity()), "identity");
  }
  bool finite = std::all_of(chain_.begin(), chain_.end(), [](const SetSpec& s) { return s.as<FiniteSet>() != nullptr; });
  if (finite) {
    return all_finite();
  }
  if (grp_.as<Integers>()) {
    bool has_tail = !indices_of(4).empty();
    bool has_residue = !indices_of(1).empty();
    if (!has_tail) {
      return residue_dp();
    }
    if (!has_residue) {
      return finite_and_tails();
    }
    return bounded("no exact route for residue sets mixed with tail sets");
  }
  if (grp_.as<ProductMod>()) {
    return boxes();
  }
  if (grp_.as<Rationals>()) {
    return intervals();
  }
  return unknown("unsupported set representation");
}

Membership Solver::all_finite() {
  std::vector<std::vector<Element>> lists;
  for (const auto& s : chain_) {
    lists.push_back(star(s).enumerate());
  }
  auto reach = finite_reach(grp_, lists, budget_.max_states);
  if (!reach) {
    return unknown("finite product enumeration exceeded " + std::to_string(budget_.max_states) + " states");
  }
  if (reach->layers.back().count(g_)) {
    return yes(trace(*reach, g_), "finite-product-closure");
  }
  return no("finite-product-closure");
}

Membership Solver::residue_dp() {
  // State (G, r): G = 0 means the exact partial sum is r; otherwise the
  // partial sums form the class r mod G.
  using Key = std::pair<Int, Int>;
  struct Choice {
    bool is_class = false;
    Int value;    // finite summand, or class representative
    Int modulus;  // class modulus
  };
  struct Pieces {
    std::vector<Int> points;
    Int modulus = 0;
    std::vector<Int> classes;
  };
  std::vector<Pieces> pieces(chain_.size());
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    StarSet st = star(chain_[i]);
    if (const auto* f = st.base().as<FiniteSet>()) {
      for (const auto& e : f->elements) {
        pieces[i].points.push_back(std::get<Int>(e));
      }
    } else {
      const auto& r = *st.base().as<ResidueSet>();
      pieces[i].modulus = r.modulus;
      pieces[i].classes = r.residues;
      if (!st.closed()) {
        pieces[i].points.push_back(0);
      }
    }
  }

  std::vector<std::map<Key, std::pair<Key, Choice>>> layers(1);
  layers[0].emplace(Key{0, 0}, std::pair<Key, Choice>{Key{0, 0}, Choice{}});
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    std::map<Key, std::pair<Key, Choice>> next;
    for (const auto& [key, back] : layers.back()) {
      const auto& [G, r] = key;
      for (const auto& f : pieces[i].points) {
        Key k = G.is_zero() ? Key{0, r + f} : Key{G, mod(r + f, G)};
        next.try_emplace(k, std::pair<Key, Choice>{key, Choice{false, f, 0}});
      }
      if (!pieces[i].classes.empty()) {
        Int G2 = gcd(G, pieces[i].modulus);
        for (const auto& rho : pieces[i].classes) {
          next.try_emplace(Key{G2, mod(r + rho, G2)}, std::pair<Key, Choice>{key, Choice{true, rho, pieces[i].modulus}});
        }
      }
      if (next.size() > budget_.max_states) {
        return bounded("residue dynamic program exceeded " + std::to_string(budget_.max_states) + " states");
      }
    }
    layers.push_back(std::move(next));
  }

  const Int& target = std::get<Int>(g_);
  const Key* hit = nullptr;
  for (const auto& entry : layers.back()) {
    const auto& [G, r] = entry.first;
    if (G.is_zero() ? r == target : mod(target, G) == r) {
      hit = &entry.first;
      break;
    }
  }
  if (!hit) {
    return no("residue-class-dp");
  }

  std::vector<Choice> choices(chain_.size());
  Key k = *hit;
  for (std::size_t i = chain_.size(); i > 0; --i) {
    const auto& back = layers[i].at(k);
    choices[i - 1] = back.second;
    k = back.first;
  }
  // Lift class representatives: find a_i with sum a_i M_i = remainder.
  Int rest = target;
  std::vector<std::size_t> cls;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    rest -= choices[i].value;
    if (choices[i].is_class) {
      cls.push_back(i);
    }
  }
  std::vector<Int> summands(chain_.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    summands[i] = choices[i].value;
  }
  if (!cls.empty()) {
    Int d = choices[cls[0]].modulus;
    std::vector<Int> coeff{1};
    for (std::size_t j = 1; j < cls.size(); ++j) {
      auto eg = extended_gcd(d, choices[cls[j]].modulus);
      for (auto& c : coeff) {
        c *= eg.x;
      }
      coeff.push_back(eg.y);
      d = eg.gcd;
    }
    Int scale = exact_div(rest, d);
    for (std::size_t j = 0; j < cls.size(); ++j) {
      summands[cls[j]] += coeff[j] * scale * choices[cls[j]].modulus;
    }
  } else if (!rest.is_zero()) {
    throw std::logic_error("internal error: residue dp accepted an unbalanced state");
  }
  std::vector<Element> out(summands.begin(), summands.end());
  return yes(std::move(out), "residue-class-dp");
}

Membership Solver::finite_and_tails() {
  std::vector<std::size_t> fin = indices_of(0);
  std::vector<std::size_t> tail = indices_of(4);
  for (auto i : tail) {
    tails_.push_back(chain_[i].as<TailSet>());
  }
  std::vector<std::vector<Element>> lists;
  for (auto i : fin) {
    lists.push_back(star(chain_[i]).enumerate());
  }
  auto reach = finite_reach(grp_, lists, budget_.max_states);
  if (!reach) {
    return bounded("finite part exceeded " + std::to_string(budget_.max_states) + " states");
  }
  bool any_unknown = false;
  std::string proof;
  std::string why;
  for (const auto& entry : reach->layers.back()) {
    Int h = std::get<Int>(g_) - std::get<Int>(entry.first);
    std::vector<Int> tail_values;
    std::string tag;
    Truth t = decide_tails(h, tail_values, tag);
    if (t == Truth::yes) {
      std::vector<Element> summands(chain_.size(), Element(Int(0)));
      auto fin_values = trace(*reach, entry.first);
      for (std::size_t j = 0; j < fin.size(); ++j) {
        summands[fin[j]] = fin_values[j];
      }
      for (std::size_t j = 0; j < tail.size(); ++j) {
        summands[tail[j]] = tail_values[j];
      }
      return yes(std::move(summands), tag);
    }
    if (t == Truth::unknown) {
      any_unknown = true;
      why = tag;
    } else {
      proof = tag;
    }
  }
  if (any_unknown) {
    return unknown(why);
  }
  return no(proof);
}

Truth Solver::decide_tails(const Int& h, std::vector<Int>& out, std::string& proof) {
  const auto& seq = tails_.front()->sequence;
  bool same = std::all_of(tails_.begin(), tails_.end(),
                          [&](const TailSet* t) { return t->sequence->id() == seq->id(); });
  try {
    if (same && seq->divisibility_chain()) {
      proof = "carry-dp";
      if (auto r = carry_decompose(h, tails_)) {
        out = *r;
        return Truth::yes;
      }
      return Truth::no;
    }
    if (same && seq->growth_from() && seq->ratio() > Int(tails_.size()) - Int(1)) {
      proof = "ratio-cutoff";
      Truth t = ratio_cutoff(h, out);
      if (t != Truth::unknown) {
        return t;
      }
      proof = "ratio-cutoff enumeration exceeded the node budget";
    } else {
      proof = "no exact cutoff for these tail sets";
    }
  } catch (const BudgetExceeded& e) {
    proof = e.what();
  }
  try {
    if (bounded_tails(h, out)) {
      proof = "bounded-search";
      return Truth::yes;
    }
  } catch (const BudgetExceeded& e) {
    proof = e.what();
  }
  return Truth::unknown;
}

Truth Solver::ratio_cutoff(const Int& h, std::vector<Int>& out) {
  const auto& seq = *tails_.front()->sequence;
  const Int& rho = seq.ratio();
  Int n_t(tails_.size());
  Int cut = floor_div(rho * abs(h), rho - n_t + Int(1));
  Int cert = abs(seq.term(*seq.growth_from()));
  if (cert > cut) {
    cut = cert;
  }
  std::vector<std::vector<Int>> cand(tails_.size());
  std::size_t product = 1;
  for (std::size_t i = 0; i + 1 < tails_.size(); ++i) {
    cand[i].push_back(0);
    for (std::size_t k = tails_[i]->start;; ++k) {
      Int x = seq.term(k);
      if (abs(x) > cut) {
        break;
      }
      if (tails_[i]->allows(k)) {
        cand[i].push_back(x);
        cand[i].push_back(-x);
      }
    }
    product *= cand[i].size();
    if (product > budget_.max_nodes) {
      return Truth::unknown;
    }
  }
  StarSet last = star(SetSpec::tail(tails_.back()->sequence, tails_.back()->start, tails_.back()->excluded));
  std::vector<Int> pick(tails_.size());
  std::function<bool(std::size_t, const Int&)> dfs = [&](std::size_t i, const Int& rem) {
    if (i + 1 == tails_.size()) {
      if (last.contains(rem)) {
        pick[i] = rem;
        return true;
      }
      return false;
    }
    for (const auto& v : cand[i]) {
      pick[i] = v;
      if (dfs(i + 1, rem - v)) {
        return true;
      }
    }
    return false;
  };
  if (dfs(0, h)) {
    out = pick;
    return Truth::yes;
  }
  return Truth::no;
}

bool Solver::bounded_tails(const Int& h, std::vector<Int>& out) {
  std::vector<std::vector<Int>> cand(tails_.size());
  for (std::size_t i = 0; i + 1 < tails_.size(); ++i) {
    cand[i].push_back(0);
    std::size_t taken = 0;
    for (std::size_t k = tails_[i]->start; taken < budget_.candidates_per_set; ++k) {
      if (tails_[i]->allows(k)) {
        Int x = tails_[i]->sequence->term(k);
        cand[i].push_back(x);
        cand[i].push_back(-x);
        ++taken;
      }
    }
  }
  StarSet last = star(SetSpec::tail(tails_.back()->sequence, tails_.back()->start, tails_.back()->excluded));
  std::vector<Int> pick(tails_.size());
  std::size_t nodes = 0;
  std::function<bool(std::size_t, const Int&)> dfs = [&](std::size_t i, const Int& rem) {
    if (++nodes > budget_.max_nodes) {
      return false;
    }
    if (i + 1 == tails_.size()) {
      if (last.contains(rem)) {
        pick[i] = rem;
        return true;
      }
      return false;
    }
    for (const auto& v : cand[i]) {
      pick[i] = v;
      if (dfs(i + 1, rem - v)) {
        return true;
      }
    }
    return false;
  };
  if (dfs(0, h)) {
    out = pick;
    return true;
  }
  return false;
}

Membership Solver::boxes() {
  std::vector<std::size_t> fin = indices_of(0);
  std::vector<std::size_t> box = indices_of(2);
  std::vector<std::vector<Element>> lists;
  for (auto i : fin) {
    lists.push_back(star(chain_[i]).enumerate());
  }
  auto reach = finite_reach(grp_, lists, budget_.max_states);
  if (!reach) {
    return unknown("finite part exceeded " + std::to_string(budget_.max_states) + " states");
  }
  std::size_t N = grp_.as<ProductMod>()->N;
  for (const auto& entry : reach->layers.back()) {
    const auto& h = std::get<ResidueVector>(grp_.sub(g_, entry.first)).coords;
    // coords[b][n-1] is box b's value at coordinate n.
    std::vector<std::vector<std::int64_t>> coords(box.size(), std::vector<std::int64_t>(N, 0));
    bool ok = true;
    for (std::size_t n = 1; n <= N && ok; ++n) {
      auto nn = static_cast<std::int64_t>(n);
      // back[b][v]: value chosen by box b to reach partial sum v, or -1.
      std::vector<std::vector<std::int64_t>> back(box.size(), std::vector<std::int64_t>(n, -1));
      std::vector<bool> cur(n, false);
      cur[0] = true;
      for (std::size_t b = 0; b < box.size(); ++b) {
        const auto& bs = *chain_[box[b]].as<BoxSet>();
        std::vector<bool> next(n, false);
        for (std::int64_t v = 0; v < nn; ++v) {
          if (!cur[v]) {
            continue;
          }
          for (std::int64_t a = 0; a < nn; ++a) {
            if (n <= bs.allowed.size() && !std::binary_search(bs.allowed[n - 1].begin(), bs.allowed[n - 1].end(), a)) {
              continue;
            }
            std::int64_t w = (v + a) % nn;
            if (!next[w]) {
              next[w] = true;
              back[b][w] = a;
            }
          }
        }
        cur = std::move(next);
      }
      std::int64_t want = h[n - 1];
      if (!cur[want]) {
        ok = false;
        break;
      }
      for (std::size_t b = box.size(); b > 0; --b) {
        std::int64_t a = back[b - 1][want];
        coords[b - 1][n - 1] = a;
        want = ((want - a) % nn + nn) % nn;
      }
    }
    if (ok) {
      std::vector<Element> summands(chain_.size(), grp_.identity());
      auto fin_values = trace(*reach, entry.first);
      for (std::size_t j = 0; j < fin.size(); ++j) {
        summands[fin[j]] = fin_values[j];
      }
      for (std::size_t b = 0; b < box.size(); ++b) {
        summands[box[b]] = ResidueVector{coords[b]};
      }
      return yes(std::move(summands), "box-coordinate-dp");
    }
  }
  return no("box-coordinate-dp");
}

Membership Solver::intervals() {
  std::vector<std::size_t> fin = indices_of(0);
  std::vector<std::size_t> iv = indices_of(3);
  std::vector<std::vector<Element>> lists;
  for (auto i : fin) {
    lists.push_back(star(chain_[i]).enumerate());
  }
  auto reach = finite_reach(grp_, lists, budget_.max_states);
  if (!reach) {
    return unknown("finite part exceeded " + std::to_string(budget_.max_states) + " states");
  }
  Rational total = 0;
  for (auto i : iv) {
    total += chain_[i].as<SymmetricInterval>()->epsilon;
  }
  for (const auto& entry : reach->layers.back()) {
    Rational h = std::get<Rational>(grp_.sub(g_, entry.first));
    if (abs(h) < total) {
      std::vector<Element> summands(chain_.size(), grp_.identity());
      auto fin_values = trace(*reach, entry.first);
      for (std::size_t j = 0; j < fin.size(); ++j) {
        summands[fin[j]] = fin_values[j];
      }
      // Split h in proportion to the radii: |h * eps_i / total| < eps_i.
      for (auto i : iv) {
        Rational part = h * chain_[i].as<SymmetricInterval>()->epsilon / total;
        part.canonicalize();
        summands[i] = part;
      }
      return yes(std::move(summands), "interval-sum");
    }
  }
  return no("interval-sum");
}

Membership Solver::bounded(const std::string& why) {
  if (!grp_.as<Integers>()) {
    return unknown(why);
  }
  std::vector<std::vector<Int>> cand(chain_.size());
  for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
    StarSet st = star(chain_[i]);
    if (const auto* f = st.base().as<FiniteSet>()) {
      for (const auto& e : f->elements) {
        cand[i].push_back(std::get<Int>(e));
      }
    } else if (const auto* t = chain_[i].as<TailSet>()) {
      cand[i].push_back(0);
      std::size_t taken = 0;
      try {
        for (std::size_t k = t->start; taken < budget_.candidates_per_set; ++k) {
          if (t->allows(k)) {
            Int x = t->sequence->term(k);
            cand[i].push_back(x);
            cand[i].push_back(-x);
            ++taken;
          }
        }
      } catch (const BudgetExceeded&) {
      }
    } else {
      // Residue classes: the members of smallest absolute value.
      for (std::int64_t v = 0; cand[i].size() < budget_.candidates_per_set && v < 64 * static_cast<std::int64_t>(budget_.candidates_per_set); ++v) {
        if (st.contains(Int(v))) {
          cand[i].push_back(v);
        }
        if (v > 0 && st.contains(Int(-v))) {
          cand[i].push_back(-v);
        }
      }
    }
  }
  StarSet last = star(chain_.back());
  std::vector<Int> pick(chain_.size());
  std::size_t nodes = 0;
  bool exhausted = false;
  std::function<bool(std::size_t, const Int&)> dfs = [&](std::size_t i, const Int& rem) {
    if (++nodes > budget_.max_nodes) {
      exhausted = true;
      return false;
    }
    if (i + 1 == chain_.size()) {
      try {
        if (last.contains(rem)) {
          pick[i] = rem;
          return true;
        }
      } catch (const BudgetExceeded&) {
      }
      return false;
    }
    for (const auto& v : cand[i]) {
      pick[i] = v;
      if (dfs(i + 1, rem - v)) {
        return true;
      }
    }
    return false;
  };
  if (dfs(0, std::get<Int>(g_))) {
    return yes(std::vector<Element>(pick.begin(), pick.end()), "bounded-search");
  }
  return unknown(why + (exhausted ? "; bounded search hit the node limit" : "; bounded search found no witness"));
}

}  // namespace

std::optional<std::vector<Int>> carry_decompose(const Int& h, const std::vector<const TailSet*>& tails) {
  if (tails.empty()) {
    return h.is_zero() ? std::optional<std::vector<Int>>(std::vector<Int>{}) : std::nullopt;
  }
  const Sequence& seq = *tails.front()->sequence;
  if (!seq.divisibility_chain()) {
    throw PreconditionError("carry decomposition needs a divisibility chain");
  }
  if (tails.size() > 16) {
    throw BudgetExceeded("carry decomposition supports at most 16 tail sets");
  }
  Int x0 = seq.term(0);
  if (!divides(x0, h)) {
    return std::nullopt;
  }
  const unsigned full = (1u << tails.size()) - 1;
  std::vector<std::pair<std::size_t, int>> assign(tails.size(), {0, 0});
  std::set<std::tuple<std::size_t, Int, unsigned>> failed;

  // v * x_j is what remains to be written using indices >= j.
  std::function<bool(std::size_t, const Int&, unsigned)> dfs = [&](std::size_t j, const Int& v, unsigned used) {
    if (v.is_zero()) {
      return true;
    }
    if (used == full) {
      return false;
    }
    auto key = std::make_tuple(j, v, used);
    if (failed.count(key)) {
      return false;
    }
    Int r = exact_div(seq.term(j + 1), seq.term(j));
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < tails.size(); ++i) {
      if (!(used & (1u << i)) && tails[i]->allows(j)) {
        eligible.push_back(i);
      }
    }
    for (unsigned sub = 0; sub < (1u << eligible.size()); ++sub) {
      unsigned mask = 0;
      int c = 0;
      for (std::size_t e = 0; e < eligible.size(); ++e) {
        if (sub & (1u << e)) {
          mask |= 1u << eligible[e];
          ++c;
        }
      }
      for (int sign : {1, -1}) {
        if (c == 0 && sign < 0) {
          continue;
        }
        Int rest = v - Int(sign * c);
        if (!divides(r, rest) && !rest.is_zero()) {
          continue;
        }
        if (dfs(j + 1, rest.is_zero() ? Int(0) : exact_div(rest, r), used | mask)) {
          for (std::size_t e = 0; e < eligible.size(); ++e) {
            if (sub & (1u << e)) {
              assign[eligible[e]] = {j, sign};
            }
          }
          return true;
        }
      }
    }
    failed.insert(key);
    return false;
  };

  if (!dfs(0, exact_div(h, x0), 0)) {
    return std::nullopt;
  }
  std::vector<Int> out(tails.size(), Int(0));
  for (std::size_t i = 0; i < tails.size(); ++i) {
    if (assign[i].second != 0) {
      out[i] = Int(assign[i].second) * seq.term(assign[i].first);
    }
  }
  return out;
}

Membership prefix_sum_membership(const Element& g, const std::vector<SetSpec>& chain, const SearchBudget& budget) {
  if (chain.empty()) {
    Group grp = infer_group(g);
    grp.check(g);
    if (grp.is_identity(g)) {
      return {Truth::yes, Decomposition{grp, g, {}, {}}, "identity"};
    }
    return {Truth::no, std::nullopt, "empty-sum"};
  }
  return Solver(g, chain, budget).run();
}

}  // namespace gtop
