#pragma once

#include "qsh/pricing.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qsh {

/// Strategy theta with theta . dY >= epsilon on every relevant atom.
struct IpCertificate {
    Point theta;
    double epsilon = 0.0;
};

struct AipCheck {
    bool holds = false;
    /// Support of dY; weights below refer to its points.
    SupportSet increments;
    /// Convex weights on the dY support summing to the origin.
    std::optional<std::vector<double>> weights;
    std::optional<IpCertificate> ip;
};

struct NaCheck {
    bool holds = false;
    SupportSet increments;
    /// Strictly positive convex weights on the dY support summing to the origin.
    std::optional<std::vector<double>> weights;
    /// h with h . dY >= 0 q.s. and h . dY > 0 on some non-polar atom.
    std::optional<Point> violation;
};

enum class MarketClass { NA, AipOnly, IP };

std::string_view to_string(MarketClass c);

struct ArbitrageReport {
    bool aip = false;
    bool na = false;
    SupportSet increments;
    std::optional<std::vector<double>> aip_certificate;
    std::optional<IpCertificate> ip_certificate;
    std::optional<std::vector<double>> na_certificate;
    std::optional<Point> na_violation;

    [[nodiscard]] MarketClass classification() const {
        if (na) return MarketClass::NA;
        return aip ? MarketClass::AipOnly : MarketClass::IP;
    }
};

/// Absence of instantaneous profit: 0 in conv supp dY.
AipCheck check_aip(const OnePeriodMarket& market, const lp::Options& options = {});

/// Quasi-sure no-arbitrage: 0 in the relative interior of conv supp dY.
NaCheck check_na(const OnePeriodMarket& market, const lp::Options& options = {});

/// Both checks with their certificates.
ArbitrageReport arbitrage_report(const OnePeriodMarket& market, const lp::Options& options = {});

MarketClass classify(const OnePeriodMarket& market, const lp::Options& options = {});

/// min(support) <= y <= max(support).
bool interval_rule_1d(double y, std::span<const double> support);

/// Interval rule on a one-asset market; throws DimensionError otherwise.
bool interval_rule_1d(const OnePeriodMarket& market);

}  // namespace qsh
