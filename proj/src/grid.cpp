#include "fuss/grid.hpp"

#include "fuss/errors.hpp"

#include <cmath>

namespace fuss {

FitnessGrid FitnessGrid::from_range(double f_min, double f_max, double epsilon) {
    if (!(epsilon > 0.0))
        throw ConfigError("fitness grid: epsilon must be positive");
    if (f_max < f_min)
        throw ConfigError("fitness grid: f_max < f_min");
    const double steps = (f_max - f_min) / epsilon;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
        throw ConfigError("fitness grid: (f_max - f_min) / epsilon is not an integer");
    return FitnessGrid(f_min, epsilon, static_cast<std::size_t>(rounded) + 1);
}

FitnessGrid FitnessGrid::from_levels(double f_min, double epsilon, std::size_t levels) {
    if (!(epsilon > 0.0))
        throw ConfigError("fitness grid: epsilon must be positive");
    if (levels < 1)
        throw ConfigError("fitness grid: at least one level required");
    return FitnessGrid(f_min, epsilon, levels);
}

std::size_t FitnessGrid::nearest_index(double f) const {
    const double raw = std::round((f - f_min_) / epsilon_);
    if (raw <= 0.0) return 0;
    const auto idx = static_cast<std::size_t>(raw);
    return idx >= levels_ ? levels_ - 1 : idx;
}

} // namespace fuss
