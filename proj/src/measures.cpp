#include "qsh/measures.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qsh {

namespace {

void check_weights(const std::vector<double>& weights) {
    if (weights.empty()) throw Error(ErrorCode::InvalidMeasure, "prior has no atoms");
    for (double w : weights) {
        if (!std::isfinite(w)) throw Error(ErrorCode::InvalidMeasure, "weight is not finite");
        if (w < 0.0) throw Error(ErrorCode::InvalidMeasure, "weight is negative");
    }
}

void require_matching(const PriorFamily& family, std::size_t atoms) {
    if (atoms != family.atom_count()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "variable has " + std::to_string(atoms) + " atoms, family has " +
                        std::to_string(family.atom_count()));
    }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    check_weights(weights_);
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > kMassTolerance) {
        throw Error(ErrorCode::InvalidMeasure,
                    "weights sum to " + std::to_string(total) + " instead of 1");
    }
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<double> weights) {
    check_weights(weights);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidMeasure, "prior has zero total mass");
    for (double& w : weights) w /= total;
    return DiscreteMeasure(std::move(weights));
}

PriorFamily::PriorFamily(std::vector<DiscreteMeasure> priors) : priors_(std::move(priors)) {
    if (priors_.empty()) throw Error(ErrorCode::EmptyFamily, "prior family is empty");
    atom_count_ = priors_.front().atom_count();
    for (const auto& p : priors_) {
        if (p.atom_count() != atom_count_) {
            throw Error(ErrorCode::DimensionMismatch, "priors disagree on the atom count");
        }
    }
    if (relevant_atoms(*this).empty()) {
        throw Error(ErrorCode::InvalidMeasure, "no atom is charged by any prior");
    }
}

std::vector<std::size_t> relevant_atoms(const PriorFamily& family) {
    std::vector<std::size_t> atoms;
    for (std::size_t j = 0; j < family.atom_count(); ++j) {
        const auto& ps = family.priors();
        if (std::any_of(ps.begin(), ps.end(), [j](const DiscreteMeasure& p) { return p.charges(j); })) {
            atoms.push_back(j);
        }
    }
    return atoms;
}

std::vector<std::size_t> polar_atoms(const PriorFamily& family) {
    const auto relevant = relevant_atoms(family);
    std::vector<std::size_t> polar;
    for (std::size_t j = 0; j < family.atom_count(); ++j) {
        if (!std::binary_search(relevant.begin(), relevant.end(), j)) polar.push_back(j);
    }
    return polar;
}

SupportSet quasi_support(const PriorFamily& family, const RandomVariable& x) {
    require_matching(family, x.atom_count());
    std::vector<Point> charged;
    for (std::size_t j : relevant_atoms(family)) charged.push_back(x.values[j]);
    return SupportSet(std::move(charged));
}

double essential_supremum(const PriorFamily& family, std::span<const ScalarVariable> variables) {
    if (variables.empty()) throw Error(ErrorCode::EmptyFamily, "no variables given");
    const auto atoms = relevant_atoms(family);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : variables) {
        require_matching(family, v.values.size());
        for (std::size_t j : atoms) best = std::max(best, v.values[j]);
    }
    return best;
}

double essup_of_function(const PriorFamily& family, const RandomVariable& x,
                         const PointFunction& h) {
    const SupportSet support = quasi_support(family, x);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : support) {
        const auto v = h(z);
        if (!v) throw Error(ErrorCode::MissingValue, "function undefined on a support point");
        best = std::max(best, *v);
    }
    return best;
}

}  // namespace qsh
