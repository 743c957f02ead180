#include "gtop/codec.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gtop/error.hpp"

namespace gtop {

namespace {

std::string at(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError("missing field '" + key + "'", where);
  }
  return j.at(key);
}

}  // namespace

json int_to_json(const Int& v) {
  if (auto small = v.try_int64()) {
    return *small;
  }
  return v.str();
}

Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return Int(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    try {
      return Int::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(e.what(), where);
    }
  }
  throw ParseError("expected an integer", where);
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return Rational(int_from_json(j).to_mpz());
  }
  if (j.is_string()) {
    Rational q;
    if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) {
      throw ParseError("invalid rational '" + j.get<std::string>() + "'", where);
    }
    q.canonicalize();
    return q;
  }
  throw ParseError("expected a rational", where);
}

json group_to_json(const Group& g) {
  if (g.as<Integers>()) {
    return {{"kind", "integers"}};
  }
  if (const auto* p = g.as<ProductMod>()) {
    return {{"kind", "product_mod"}, {"N", p->N}};
  }
  if (g.as<Rationals>()) {
    return {{"kind", "rationals"}};
  }
  if (const auto* f = g.as<FreeGroup>()) {
    return {{"kind", "free"}, {"generators", f->generators}};
  }
  const auto& t = *g.as<Cayley>()->table;
  json j = {{"kind", "cayley"}, {"order", t.order()}, {"table", t.rows()}};
  if (!t.names().empty()) {
    j["names"] = t.names();
  }
  return j;
}

Group load_cayley(const json& j) {
  if (!j.is_object() || !j.contains("table")) {
    throw ParseError("Cayley document needs a 'table' field");
  }
  std::vector<std::vector<std::uint32_t>> rows;
  try {
    rows = j.at("table").get<std::vector<std::vector<std::uint32_t>>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed table: ") + e.what(), "table");
  }
  if (j.contains("order") && j.at("order").get<std::size_t>() != rows.size()) {
    throw InvalidGroupTable("declared order " + j.at("order").dump() + " but the table has " +
                            std::to_string(rows.size()) + " rows");
  }
  std::vector<std::string> names;
  if (j.contains("names")) {
    names = j.at("names").get<std::vector<std::string>>();
  }
  return Group::cayley(CayleyTable(std::move(rows), std::move(names)));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file", path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), path + ":byte " + std::to_string(e.byte));
  }
}

Group load_cayley_file(const std::string& path) { return load_cayley(read_json_file(path)); }

std::string fixture_dir() {
  if (const char* env = std::getenv("GTOP_FIXTURE_DIR"); env && *env) {
    return env;
  }
  return GTOP_DATA_DIR;
}

Group group_from_json(const json& j, const std::string& where) {
  std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "integers") {
    return Group::integers();
  }
  if (kind == "product_mod") {
    return Group::product_mod(field(j, "N", where).get<std::size_t>());
  }
  if (kind == "rationals") {
    return Group::rationals();
  }
  if (kind == "free") {
    return Group::free(field(j, "generators", where).get<std::vector<std::string>>());
  }
  if (kind == "cayley") {
    if (j.contains("fixture")) {
      return load_cayley_file(fixture_dir() + "/" + field(j, "fixture", where).get<std::string>());
    }
    return load_cayley(j);
  }
  throw ParseError("unknown group kind '" + kind + "'", at(where, "kind"));
}

json element_to_json(const Group& g, const Element& e) {
  g.check(e);
  if (const auto* i = std::get_if<Int>(&e)) {
    return int_to_json(*i);
  }
  if (const auto* v = std::get_if<ResidueVector>(&e)) {
    return v->coords;
  }
  if (const auto* c = std::get_if<CayleyIndex>(&e)) {
    if (g.as<Cayley>()->table->names().empty()) {
      return c->value;
    }
  }
  return g.format(e);
}

Element element_from_json(const Group& g, const json& j, const std::string& where) {
  try {
    if (g.as<Integers>()) {
      return int_from_json(j, where);
    }
    if (g.as<Rationals>()) {
      return rational_from_json(j, where);
    }
    if (const auto* p = g.as<ProductMod>()) {
      if (!j.is_array() || j.size() != p->N) {
        throw ParseError("expected " + std::to_string(p->N) + " coordinates", where);
      }
      ResidueVector v;
      for (std::size_t n = 1; n <= p->N; ++n) {
        auto raw = j[n - 1].get<std::int64_t>();
        auto nn = static_cast<std::int64_t>(n);
        v.coords.push_back(((raw % nn) + nn) % nn);
      }
      return v;
    }
    if (g.as<Cayley>() && j.is_number_integer()) {
      return g.parse(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
      return g.parse(j.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what(), where);
  } catch (const GroupMismatch& e) {
    throw ParseError(e.what(), where);
  }
  throw ParseError("cannot read an element of " + g.name() + " from " + j.dump(), where);
}

json setspec_to_json(const SetSpec& s) {
  if (const auto* f = s.as<FiniteSet>()) {
    json elems = json::array();
    for (const auto& e : f->elements) {
      elems.push_back(element_to_json(s.group(), e));
    }
    return {{"kind", "finite"}, {"elements", elems}};
  }
  if (const auto* r = s.as<ResidueSet>()) {
    json res = json::array();
    for (const auto& v : r->residues) {
      res.push_back(int_to_json(v));
    }
    return {{"kind", "residue"}, {"modulus", int_to_json(r->modulus)}, {"residues", res}};
  }
  if (const auto* b = s.as<BoxSet>()) {
    return {{"kind", "box"}, {"N", b->N}, {"allowed", b->allowed}};
  }
  if (const auto* iv = s.as<SymmetricInterval>()) {
    return {{"kind", "interval"}, {"epsilon", iv->epsilon.get_str()}};
  }
  const auto& t = *s.as<TailSet>();
  json j = {{"kind", "tail"}, {"sequence", t.sequence->id()}, {"start", t.start}};
  if (!t.excluded.empty()) {
    j["excluded"] = std::vector<std::size_t>(t.excluded.begin(), t.excluded.end());
  }
  return j;
}

SetSpec setspec_from_json(const json& j, const Group* context, const std::string& where) {
  std::string kind = field(j, "kind", where).get<std::string>();
  try {
    if (kind == "finite") {
      Group g = j.contains("group") ? group_from_json(j.at("group"), at(where, "group"))
                                    : (context ? *context : Group::integers());
      std::vector<Element> elems;
      const auto& list = field(j, "elements", where);
      for (std::size_t i = 0; i < list.size(); ++i) {
        elems.push_back(element_from_json(g, list[i], at(where, "elements[" + std::to_string(i) + "]")));
      }
      return SetSpec::finite(g, std::move(elems));
    }
    if (kind == "residue") {
      std::vector<Int> res;
      for (const auto& v : field(j, "residues", where)) {
        res.push_back(int_from_json(v, at(where, "residues")));
      }
      return SetSpec::residue(int_from_json(field(j, "modulus", where), at(where, "modulus")), std::move(res));
    }
    if (kind == "box") {
      return SetSpec::box(field(j, "N", where).get<std::size_t>(),
                          field(j, "allowed", where).get<std::vector<std::vector<std::int64_t>>>());
    }
    if (kind == "interval") {
      return SetSpec::interval(rational_from_json(field(j, "epsilon", where), at(where, "epsilon")));
    }
    if (kind == "tail") {
      std::set<std::size_t> excluded;
      if (j.contains("excluded")) {
        auto v = j.at("excluded").get<std::vector<std::size_t>>();
        excluded.insert(v.begin(), v.end());
      }
      return SetSpec::tail(SequenceRegistry::global().get(field(j, "sequence", where).get<std::string>()),
                           j.value("start", std::size_t{0}), std::move(excluded));
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what(), where);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), where);
  }
  throw ParseError("unknown set kind '" + kind + "'", at(where, "kind"));
}

json decomposition_to_json(const Decomposition& d) {
  json summands = json::array();
  json sets = json::array();
  for (std::size_t i = 0; i < d.summands.size(); ++i) {
    summands.push_back(element_to_json(d.group, d.summands[i]));
    sets.push_back(setspec_to_json(d.sources[i]));
  }
  return {{"witness", "decomposition"},
          {"group", group_to_json(d.group)},
          {"target", element_to_json(d.group, d.target)},
          {"summands", summands},
          {"sets", sets}};
}

Decomposition decomposition_from_json(const json& j) {
  Group g = group_from_json(field(j, "group", "witness"), "witness.group");
  Decomposition d{g, element_from_json(g, field(j, "target", "witness"), "witness.target"), {}, {}};
  for (const auto& s : field(j, "summands", "witness")) {
    d.summands.push_back(element_from_json(g, s, "witness.summands"));
  }
  for (const auto& s : field(j, "sets", "witness")) {
    d.sources.push_back(setspec_from_json(s, &g, "witness.sets"));
  }
  return d;
}

json exclusion_to_json(const Group& g, const Element& target, const std::vector<SetSpec>& sets) {
  json js = json::array();
  for (const auto& s : sets) {
    js.push_back(setspec_to_json(s));
  }
  return {{"witness", "exclusion"}, {"group", group_to_json(g)}, {"target", element_to_json(g, target)}, {"sets", js}};
}

json product_witness(const Group& g, const std::vector<Element>& factors, const Element& equals) {
  json fs = json::array();
  for (const auto& f : factors) {
    fs.push_back(element_to_json(g, f));
  }
  return {{"witness", "product"}, {"group", group_to_json(g)}, {"factors", fs}, {"equals", element_to_json(g, equals)}};
}

json congruence_witness(const Int& root, const Int& target, const Int& modulus) {
  return {{"witness", "congruence"},
          {"root", int_to_json(root)},
          {"target", int_to_json(target)},
          {"modulus", int_to_json(modulus)}};
}

namespace {

bool check_one(const json& w, std::string& message) {
  std::string kind = w.at("witness").get<std::string>();
  if (kind == "decomposition") {
    if (!recheck(decomposition_from_json(w))) {
      message = "decomposition of " + w.at("target").dump() + " does not re-verify";
      return false;
    }
    return true;
  }
  if (kind == "product") {
    Group g = group_from_json(w.at("group"));
    Element acc = g.identity();
    for (const auto& f : w.at("factors")) {
      acc = g.add(acc, element_from_json(g, f));
    }
    if (!(acc == element_from_json(g, w.at("equals")))) {
      message = "product does not equal " + w.at("equals").dump();
      return false;
    }
    return true;
  }
  if (kind == "congruence") {
    Int m = int_from_json(w.at("modulus"));
    Int r = int_from_json(w.at("root"));
    Int a = int_from_json(w.at("target"));
    if (!divides(m, r * r - a)) {
      message = "root " + r.str() + " squared is not " + a.str() + " mod " + m.str();
      return false;
    }
    return true;
  }
  if (kind == "exclusion") {
    Group g = group_from_json(w.at("group"));
    Element t = element_from_json(g, w.at("target"));
    std::vector<SetSpec> sets;
    for (const auto& s : w.at("sets")) {
      sets.push_back(setspec_from_json(s, &g));
    }
    Membership m = prefix_sum_membership(t, sets);
    if (m.truth != Truth::no) {
      message = "exclusion of " + w.at("target").dump() + " re-decided as " + to_string(m.truth);
      return false;
    }
    return true;
  }
  message = "unknown witness kind '" + kind + "'";
  return false;
}

void walk(const json& j, RecheckSummary& out) {
  if (j.is_object()) {
    if (j.contains("witness") && j.at("witness").is_string()) {
      ++out.witnesses;
      std::string message;
      bool ok = false;
      try {
        ok = check_one(j, message);
      } catch (const std::exception& e) {
        message = e.what();
      }
      if (!ok) {
        ++out.failures;
        out.messages.push_back(message);
      }
      return;
    }
    for (const auto& item : j.items()) {
      walk(item.value(), out);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      walk(v, out);
    }
  }
}

}  // namespace

RecheckSummary recheck_json(const json& doc) {
  RecheckSummary out;
  walk(doc, out);
  return out;
}

}  // namespace gtop
