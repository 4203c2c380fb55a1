#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace fuss {

using RealVector = std::vector<double>;   // coordinates in [0,1]^D
using IntScalar = long long;              // grid position on integer problems
using Permutation = std::vector<int>;     // tour over city indices

using Genome = std::variant<RealVector, IntScalar, Permutation>;

/// A feasible solution with its objective value cached at creation time.
/// The fitness field is set exactly once; evaluation never happens twice.
struct Individual {
    Genome genome;
    double fitness = 0.0;
};

inline const RealVector& as_real(const Genome& g) { return std::get<RealVector>(g); }
inline IntScalar as_int(const Genome& g) { return std::get<IntScalar>(g); }
inline const Permutation& as_perm(const Genome& g) { return std::get<Permutation>(g); }

} // namespace fuss
