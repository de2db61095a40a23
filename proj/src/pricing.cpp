#include "qsh/pricing.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsh {

namespace {

std::vector<double> claim_values(const OnePeriodMarket& market, const Claim& claim) {
    std::vector<double> z(market.atom_count(), 0.0);
    if (const auto* per_atom = std::get_if<PerAtomClaim>(&claim)) {
        if (per_atom->values.size() != market.atom_count()) {
            throw Error(ErrorCode::ClaimMismatch,
                        "claim has " + std::to_string(per_atom->values.size()) +
                            " values for " + std::to_string(market.atom_count()) + " atoms");
        }
        for (std::size_t j : market.relevant()) {
            if (!std::isfinite(per_atom->values[j])) {
                throw Error(ErrorCode::ClaimMismatch, "claim value is not finite");
            }
            z[j] = per_atom->values[j];
        }
        return z;
    }
    const auto& g = std::get<Payoff>(claim);
    if (!g) throw Error(ErrorCode::ClaimMismatch, "empty payoff");
    for (std::size_t j : market.relevant()) {
        const auto v = g(market.terminal().values[j]);
        if (!v || !std::isfinite(*v)) {
            throw Error(ErrorCode::ClaimMismatch,
                        "payoff undefined at the terminal price of atom " + std::to_string(j));
        }
        z[j] = *v;
    }
    return z;
}

std::vector<geometry::EnvelopeSample> payoff_samples(const OnePeriodMarket& market,
                                                     const Payoff& g) {
    std::vector<geometry::EnvelopeSample> samples;
    for (const auto& z : market.support()) {
        const auto v = g(z);
        if (!v || !std::isfinite(*v)) {
            throw Error(ErrorCode::MissingValue, "payoff undefined on a support point");
        }
        samples.push_back({z, *v});
    }
    return samples;
}

}  // namespace

std::string_view to_string(Closedness c) {
    switch (c) {
        case Closedness::StrictlyClosed: return "StrictlyClosed";
        case Closedness::DegenerateClosed: return "DegenerateClosed";
        case Closedness::BoundaryCase: return "BoundaryCase";
        case Closedness::NotClosed: return "NotClosed";
    }
    return "Unknown";
}

OnePeriodMarket::OnePeriodMarket(Point y, RandomVariable terminal, PriorFamily priors)
    : y_(std::move(y)), terminal_(std::move(terminal)), priors_(std::move(priors)) {
    if (y_.dim() == 0) throw Error(ErrorCode::InvalidMarket, "asset count must be positive");
    if (terminal_.atom_count() != priors_.atom_count()) {
        throw Error(ErrorCode::InvalidMarket,
                    "terminal prices cover " + std::to_string(terminal_.atom_count()) +
                        " atoms, priors cover " + std::to_string(priors_.atom_count()));
    }
    for (double c : y_.coords()) {
        if (c < 0.0) throw Error(ErrorCode::InvalidMarket, "negative initial price");
    }
    for (const auto& v : terminal_.values) {
        if (v.dim() != y_.dim()) {
            throw Error(ErrorCode::InvalidMarket, "terminal price has the wrong dimension");
        }
        for (double c : v.coords()) {
            if (c < 0.0) throw Error(ErrorCode::InvalidMarket, "negative terminal price");
        }
    }
    relevant_ = relevant_atoms(priors_);
}

Point OnePeriodMarket::increment(std::size_t atom) const { return terminal_.values.at(atom) - y_; }

SupportSet OnePeriodMarket::support() const { return quasi_support(priors_, terminal_); }

SupportSet OnePeriodMarket::increment_support() const {
    std::vector<Point> pts;
    for (std::size_t j : relevant_) pts.push_back(increment(j));
    return SupportSet(std::move(pts));
}

PayoffTable::PayoffTable(std::vector<std::pair<Point, double>> entries) {
    for (auto& [z, v] : entries) set(z, v);
}

void PayoffTable::set(const Point& z, double value) {
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, "payoff value not finite");
    for (auto& [p, v] : entries_) {
        if (p.dim() == z.dim() && linf_distance(p, z) <= kDedupTolerance) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(z, value);
}

std::optional<double> PayoffTable::lookup(const Point& z) const {
    for (const auto& [p, v] : entries_) {
        if (p.dim() == z.dim() && linf_distance(p, z) <= kDedupTolerance) return v;
    }
    return std::nullopt;
}

Payoff PayoffTable::as_payoff() const {
    return [table = *this](const Point& z) { return table.lookup(z); };
}

PriceResult superhedge_price(const OnePeriodMarket& market, const Claim& claim,
                             const lp::Options& options) {
    const auto z = claim_values(market, claim);
    const Point& y = market.initial();

    std::vector<geometry::MinimaxRow> rows;
    rows.reserve(market.relevant().size());
    for (std::size_t j : market.relevant()) {
        rows.push_back({z[j], y - market.terminal().values[j]});
    }
    const auto lp = geometry::solve_minimax(rows, market.dim(), options);

    PriceResult result;
    result.closedness = closedness_diagnostic(market, options);
    result.atoms = market.relevant();
    if (lp.status == geometry::LpStatus::UnboundedBelow) {
        result.status = PriceStatus::InstantaneousProfit;
        result.price = -std::numeric_limits<double>::infinity();
        return result;
    }
    result.status = PriceStatus::Finite;
    result.price = lp.value;
    result.theta_hat = lp.minimizer;
    result.hedge_non_unique = lp.alternative_optima;
    for (std::size_t j : market.relevant()) {
        result.certificate_slack.push_back(result.price + dot(*result.theta_hat, market.increment(j)) -
                                           z[j]);
    }
    return result;
}

double fenchel_conjugate(const OnePeriodMarket& market, const Payoff& g, const Point& x) {
    if (x.dim() != market.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "conjugate argument has the wrong dimension");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : payoff_samples(market, g)) best = std::max(best, dot(x, s.z) + s.g);
    return best;
}

double price_via_biconjugate(const OnePeriodMarket& market, const Payoff& g,
                             const lp::Options& options) {
    const auto samples = payoff_samples(market, g);
    return geometry::concave_envelope_eval(samples, market.initial(), options);
}

Closedness closedness_diagnostic(const OnePeriodMarket& market, const lp::Options& options) {
    const SupportSet increments = market.increment_support();
    const Point origin = Point::zero(market.dim());
    if (increments.size() == 1 && linf_norm(increments[0]) <= kDedupTolerance) {
        return Closedness::DegenerateClosed;
    }
    const auto membership = geometry::hull_membership(increments, origin, options);
    if (!membership.in_hull) return Closedness::NotClosed;
    if (membership.in_relative_interior &&
        geometry::affine_dimension(increments) == market.dim()) {
        return Closedness::StrictlyClosed;
    }
    return Closedness::BoundaryCase;
}

PriceSet price_set_description(const OnePeriodMarket& market, const Claim& claim,
                               const lp::Options& options) {
    const auto r = superhedge_price(market, claim, options);
    PriceSet set;
    set.lower_bound = r.price;
    // At finite support the epigraph program attains its value whenever it
    // is finite, so the bound always belongs to the set.
    if (r.status == PriceStatus::Finite) set.closed_at_bound = true;
    return set;
}

}  // namespace qsh
