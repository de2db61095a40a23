#pragma once

#include "qsh/geometry.hpp"
#include "qsh/measures.hpp"
#include "qsh/point.hpp"
#include "qsh/simplex.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qsh {

/// One-period market: initial prices y, terminal prices Y per atom and the
/// prior family on the atoms. All prices are nonnegative and discounted.
class OnePeriodMarket {
public:
    OnePeriodMarket(Point y, RandomVariable terminal, PriorFamily priors);

    [[nodiscard]] std::size_t dim() const noexcept { return y_.dim(); }
    [[nodiscard]] std::size_t atom_count() const noexcept { return terminal_.atom_count(); }
    [[nodiscard]] const Point& initial() const noexcept { return y_; }
    [[nodiscard]] const RandomVariable& terminal() const noexcept { return terminal_; }
    [[nodiscard]] const PriorFamily& priors() const noexcept { return priors_; }
    [[nodiscard]] const std::vector<std::size_t>& relevant() const noexcept { return relevant_; }

    /// Y(j) - y.
    [[nodiscard]] Point increment(std::size_t atom) const;
    /// Quasi-sure support of Y.
    [[nodiscard]] SupportSet support() const;
    /// Quasi-sure support of Y - y.
    [[nodiscard]] SupportSet increment_support() const;

private:
    Point y_;
    RandomVariable terminal_;
    PriorFamily priors_;
    std::vector<std::size_t> relevant_;
};

/// Payoff g defined on (at least) the support of Y.
using Payoff = PointFunction;

/// Finite payoff table with tolerant point lookup.
class PayoffTable {
public:
    PayoffTable() = default;
    explicit PayoffTable(std::vector<std::pair<Point, double>> entries);

    void set(const Point& z, double value);
    [[nodiscard]] std::optional<double> lookup(const Point& z) const;
    [[nodiscard]] const std::vector<std::pair<Point, double>>& entries() const noexcept {
        return entries_;
    }
    [[nodiscard]] Payoff as_payoff() const;

private:
    std::vector<std::pair<Point, double>> entries_;
};

/// General claim given atom by atom.
struct PerAtomClaim {
    std::vector<double> values;
};

using Claim = std::variant<Payoff, PerAtomClaim>;

enum class PriceStatus { Finite, InstantaneousProfit };

enum class Closedness { StrictlyClosed, DegenerateClosed, BoundaryCase, NotClosed };

std::string_view to_string(Closedness c);

struct PriceResult {
    /// -inf under instantaneous profit.
    double price = 0.0;
    PriceStatus status = PriceStatus::Finite;
    std::optional<Point> theta_hat;
    Closedness closedness = Closedness::BoundaryCase;
    /// Relevant atoms, aligned with certificate_slack.
    std::vector<std::size_t> atoms;
    /// price + theta_hat . dY(j) - Z(j) per relevant atom.
    std::vector<double> certificate_slack;
    /// Other optimal hedges may exist.
    bool hedge_non_unique = false;
};

/// Infimum superhedging cost inf_theta essup(Z - theta . dY), one minimax
/// row per relevant atom. Payoff claims are evaluated at Y(j); per-atom
/// claims keep atoms with equal Y distinct.
PriceResult superhedge_price(const OnePeriodMarket& market, const Claim& claim,
                             const lp::Options& options = {});

/// f*(x) for f = -g + indicator(supp Y): max over support of x.z + g(z).
double fenchel_conjugate(const OnePeriodMarket& market, const Payoff& g, const Point& x);

/// -f**(y): the concave envelope of g relative to supp Y evaluated at y,
/// or -inf when y lies outside conv supp Y.
double price_via_biconjugate(const OnePeriodMarket& market, const Payoff& g,
                             const lp::Options& options = {});

/// Closedness class of the price set, read off the increment support:
/// 0 interior to conv supp dY, supp dY = {0}, 0 outside the hull, or none
/// of these.
Closedness closedness_diagnostic(const OnePeriodMarket& market, const lp::Options& options = {});

struct PriceSet {
    double lower_bound = 0.0;
    /// Empty when the lower bound is -inf.
    std::optional<bool> closed_at_bound;
};

/// Price set {essup(Z - theta dY)} + R_+, described by its lower bound.
PriceSet price_set_description(const OnePeriodMarket& market, const Claim& claim,
                               const lp::Options& options = {});

}  // namespace qsh
