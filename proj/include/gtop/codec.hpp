#pragma once

// JSON encodings of groups, elements, set descriptions and witnesses.
//
//   group    {"kind":"integers"} | {"kind":"product_mod","N":6} |
//            {"kind":"rationals"} | {"kind":"free","generators":["x","y"]} |
//            {"kind":"cayley","order":n,"table":[[...]],"names":[...]}
//   element  integer: number (string when beyond 64 bits); rational: "p/q";
//            residue vector: array; word: "x*y^-1" ("e" for the identity);
//            Cayley element: its name, or its index when unnamed
//   setspec  {"kind":"finite","elements":[...]} |
//            {"kind":"residue","modulus":9,"residues":[0,4,5]} |
//            {"kind":"box","N":6,"allowed":[[0],[0,1],...]} |
//            {"kind":"interval","epsilon":"1/4"} |
//            {"kind":"tail","sequence":"powers3","start":2,"excluded":[5]}

#include <string>
#include <vector>

#include "gtop/group.hpp"
#include "gtop/membership.hpp"
#include "gtop/report.hpp"
#include "gtop/setspec.hpp"

namespace gtop {

json int_to_json(const Int& v);
Int int_from_json(const json& j, const std::string& where = {});
Rational rational_from_json(const json& j, const std::string& where = {});

json group_to_json(const Group& g);
Group group_from_json(const json& j, const std::string& where = {});
// Reads a Cayley table document {"order","table","names"}.
Group load_cayley(const json& j);
Group load_cayley_file(const std::string& path);

json element_to_json(const Group& g, const Element& e);
Element element_from_json(const Group& g, const json& j, const std::string& where = {});

json setspec_to_json(const SetSpec& s);
// Finite sets take their group from `context` (integers when null).
SetSpec setspec_from_json(const json& j, const Group* context = nullptr, const std::string& where = {});

// Witness objects carry a "witness" tag so --recheck can find them anywhere
// inside a report.
json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& j);
json exclusion_to_json(const Group& g, const Element& target, const std::vector<SetSpec>& sets);
json product_witness(const Group& g, const std::vector<Element>& factors, const Element& equals);
json congruence_witness(const Int& root, const Int& target, const Int& modulus);

struct RecheckSummary {
  std::size_t witnesses = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
};

// Re-verifies every tagged witness found in `doc`.
RecheckSummary recheck_json(const json& doc);

json read_json_file(const std::string& path);
// $GTOP_FIXTURE_DIR, or the data directory of the source tree. A Cayley group
// document {"kind": "cayley", "fixture": "d4.json"} is loaded from here.
std::string fixture_dir();

}  // namespace gtop
