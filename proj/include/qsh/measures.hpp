#pragma once

#include "qsh/point.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qsh {

/// An atom weight counts as charged iff it exceeds this threshold.
inline constexpr double kPolarityThreshold = 1e-12;

/// Tolerance on the total mass of a prior.
inline constexpr double kMassTolerance = 1e-9;

/// Probability vector over a finite atom list.
class DiscreteMeasure {
public:
    /// Throws InvalidMeasure unless weights are finite, nonnegative and sum
    /// to one within kMassTolerance.
    explicit DiscreteMeasure(std::vector<double> weights);

    /// Rescales nonnegative weights with positive total mass to sum to one.
    static DiscreteMeasure normalized(std::vector<double> weights);

    [[nodiscard]] std::size_t atom_count() const noexcept { return weights_.size(); }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double operator[](std::size_t j) const { return weights_[j]; }
    [[nodiscard]] bool charges(std::size_t j) const { return weights_[j] > kPolarityThreshold; }

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    std::vector<double> weights_;
};

/// Non-empty finite family of priors over a shared atom list.
class PriorFamily {
public:
    explicit PriorFamily(std::vector<DiscreteMeasure> priors);

    [[nodiscard]] std::size_t atom_count() const noexcept { return atom_count_; }
    [[nodiscard]] const std::vector<DiscreteMeasure>& priors() const noexcept { return priors_; }

    friend bool operator==(const PriorFamily&, const PriorFamily&) = default;

private:
    std::size_t atom_count_ = 0;
    std::vector<DiscreteMeasure> priors_;
};

/// R^d-valued random variable, one value per atom.
struct RandomVariable {
    std::vector<Point> values;

    [[nodiscard]] std::size_t atom_count() const noexcept { return values.size(); }
    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;
};

/// Real-valued random variable, one value per atom.
struct ScalarVariable {
    std::vector<double> values;
};

/// A function known on a finite set of points; nullopt means undefined.
using PointFunction = std::function<std::optional<double>(const Point&)>;

/// Atoms charged by at least one prior, ascending. The rest are polar.
std::vector<std::size_t> relevant_atoms(const PriorFamily& family);

/// Atoms charged by no prior, ascending.
std::vector<std::size_t> polar_atoms(const PriorFamily& family);

/// Quasi-sure support: the deduplicated values of X on non-polar atoms.
SupportSet quasi_support(const PriorFamily& family, const RandomVariable& x);

/// Quasi-sure essential supremum of a finite family of scalar variables:
/// the largest value any of them takes on a non-polar atom.
double essential_supremum(const PriorFamily& family, std::span<const ScalarVariable> variables);

/// Supremum of h over the quasi-sure support of X. Throws MissingValue if h
/// is undefined at some support point.
double essup_of_function(const PriorFamily& family, const RandomVariable& x,
                         const PointFunction& h);

}  // namespace qsh
