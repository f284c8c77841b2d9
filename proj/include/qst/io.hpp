#pragma once

#include "qst/lattice.hpp"
#include "qst/mc.hpp"

#include <json.hpp>

namespace qst {

using json = nlohmann::json;

json to_json(const Quiver& q);
Quiver quiver_from_json(const json& j);
// "torus:d=2,m=3[,self_loops=1,a=1,tau=1]", "shifted:m=4", "cycle:n=3", "complete:n=3",
// "jordan[:loops=2]", "path:n=2", or the name of a JSON file.
Quiver parse_quiver_spec(const std::string& spec);
// "d=2,m=5[,self_loops=1,a=..,tau=..]"
LatticeSpec parse_lattice_spec(const std::string& text);

json to_json(const Profile& p);
Profile profile_from_json(const json& j);
json to_json(const IntMatrix& C);
IntMatrix int_matrix_from_json(const json& j);
json to_json(const BratteliNetwork& net);
BratteliNetwork network_from_json(const json& j);
json to_json(const GroupProfile& g);

json to_json(const CMat& M);
CMat matrix_from_json(const json& j);
json to_json(const Representation& rep);
Representation representation_from_json(const json& j);

json to_json(const LatticeTraceReport& r);
json to_json(const D6Decomposition& r);
json to_json(const McEstimate& e);
json to_json(const CurvatureResult& r);

std::string to_string(const BigInt& x);

} // namespace qst
