// serialize.hpp: JSON and CSV forms of the library types.
//
//   matrix        {"rows": r, "cols": c, "entries": [[re, im], ...]}  (row-major)
//   vector        [x1, x2, ...]
//   Hamiltonian   {"beta": b, "quantum": eps, "levels": [{"a": "p/q", "w": "r/s"}, ...]}
//   realization   {"n": n, "m": m, "U": matrix}
//   witness       {"D": [[...], ...]} or {"terms": [{"w": w, "perm": [...]}, ...]}

#pragma once

#include "thermo/energy.hpp"
#include "thermo/majorization.hpp"
#include "thermo/noisy.hpp"
#include "thermo/thermal.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace thermo {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j);

Json to_json(const RealVector& v);
Json to_json(const RealMatrix& m);  // nested rows
RealVector real_vector_from_json(const Json& j);
RealMatrix real_matrix_from_json(const Json& j);

Json to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const Json& j);

Json to_json(const NoisyRealization& r);
NoisyRealization realization_from_json(const Json& j);

Json to_json(const StochasticMatrix& d);
Json to_json(const ConvexPermutationDecomposition& d);
Json to_json(const ConvexCombination& c);
ConvexCombination combination_from_json(const Json& j);

// "0.6,0.3,0.1" or "[0.6,0.3,0.1]"; entries may be "a/b" rationals.
RealVector parse_vector(const std::string& text);

// Inline JSON when the text starts with '{' or '[', otherwise a file path.
Json load_json(const std::string& text_or_path);

// 12 significant digits.
std::string format_number(double x);

std::string reachable_set_csv(const ReachableSet& r);
Json reachable_set_json(const ReachableSet& r);

}  // namespace thermo
