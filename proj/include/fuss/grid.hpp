#pragma once

#include <cstddef>

namespace fuss {

/// Equi-spaced fitness grid F = {f_min, f_min+eps, ..., f_max}.
/// Discrete problems carry a fixed grid; continuous runs derive a surrogate
/// grid from the population's effective discretization scale.
class FitnessGrid {
public:
    /// Build from an inclusive range. (f_max - f_min) / eps must be an
    /// integer within tolerance 1e-9.
    static FitnessGrid from_range(double f_min, double f_max, double epsilon);

    /// Build from an origin, spacing, and level count (levels >= 1).
    static FitnessGrid from_levels(double f_min, double epsilon, std::size_t levels);

    double f_min() const { return f_min_; }
    double f_max() const { return f_min_ + epsilon_ * static_cast<double>(levels_ - 1); }
    double epsilon() const { return epsilon_; }
    std::size_t levels() const { return levels_; }

    /// Fitness value of grid level i in [0, levels).
    double value(std::size_t i) const { return f_min_ + epsilon_ * static_cast<double>(i); }

    /// Index of the grid level nearest to f (clamped to the grid).
    std::size_t nearest_index(double f) const;

    bool operator==(const FitnessGrid& other) const {
        return f_min_ == other.f_min_ && epsilon_ == other.epsilon_ && levels_ == other.levels_;
    }

private:
    FitnessGrid(double f_min, double epsilon, std::size_t levels)
        : f_min_(f_min), epsilon_(epsilon), levels_(levels) {}

    double f_min_;
    double epsilon_;
    std::size_t levels_;
};

} // namespace fuss
