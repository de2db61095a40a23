#include "qsh/arbitrage.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <limits>

namespace qsh {

namespace {

// Verification slack for certificates checked against the stored support.
constexpr double kCertificateTolerance = 1e-9;

IpCertificate make_ip_certificate(const OnePeriodMarket& market, Point theta) {
    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t j : market.relevant()) eps = std::min(eps, dot(theta, market.increment(j)));
    if (!(eps > 0.0)) {
        throw Error(ErrorCode::InternalInvariant, "separator does not yield a positive profit");
    }
    return IpCertificate{std::move(theta), eps};
}

void verify_na_violation(const OnePeriodMarket& market, const Point& h) {
    bool strict = false;
    for (std::size_t j : market.relevant()) {
        const double gain = dot(h, market.increment(j));
        if (gain < -kCertificateTolerance) {
            throw Error(ErrorCode::InternalInvariant, "NA violation has a negative outcome");
        }
        strict = strict || gain > kCertificateTolerance;
    }
    if (!strict) {
        throw Error(ErrorCode::InternalInvariant, "NA violation is zero quasi-surely");
    }
}

}  // namespace

std::string_view to_string(MarketClass c) {
    switch (c) {
        case MarketClass::NA: return "NA";
        case MarketClass::AipOnly: return "AIP_only";
        case MarketClass::IP: return "IP";
    }
    return "Unknown";
}

AipCheck check_aip(const OnePeriodMarket& market, const lp::Options& options) {
    AipCheck out;
    out.increments = market.increment_support();
    auto m = geometry::hull_membership(out.increments, Point::zero(market.dim()), options);
    out.holds = m.in_hull;
    if (m.in_hull) {
        out.weights = std::move(m.barycentric_weights);
    } else {
        out.ip = make_ip_certificate(market, std::move(*m.separator));
    }
    return out;
}

NaCheck check_na(const OnePeriodMarket& market, const lp::Options& options) {
    NaCheck out;
    out.increments = market.increment_support();
    const Point origin = Point::zero(market.dim());
    auto m = geometry::hull_membership(out.increments, origin, options);
    if (m.in_relative_interior) {
        out.holds = true;
        out.weights = std::move(m.barycentric_weights);
        return out;
    }
    std::optional<Point> h = m.in_hull ? geometry::proper_separator(out.increments, origin, options)
                                       : std::move(m.separator);
    if (!h) {
        throw Error(ErrorCode::InternalInvariant,
                    "origin outside the relative interior but no proper separator found");
    }
    verify_na_violation(market, *h);
    out.violation = std::move(h);
    return out;
}

ArbitrageReport arbitrage_report(const OnePeriodMarket& market, const lp::Options& options) {
    auto aip = check_aip(market, options);
    ArbitrageReport r;
    r.aip = aip.holds;
    r.increments = std::move(aip.increments);
    r.aip_certificate = std::move(aip.weights);
    r.ip_certificate = std::move(aip.ip);
    if (r.aip) {
        auto na = check_na(market, options);
        r.na = na.holds;
        r.na_certificate = std::move(na.weights);
        r.na_violation = std::move(na.violation);
    } else {
        // Outside the hull the IP strategy itself violates NA.
        r.na = false;
        r.na_violation = r.ip_certificate->theta;
    }
    return r;
}

MarketClass classify(const OnePeriodMarket& market, const lp::Options& options) {
    return arbitrage_report(market, options).classification();
}

bool interval_rule_1d(double y, std::span<const double> support) {
    if (support.empty()) throw Error(ErrorCode::EmptyRows, "empty support");
    const auto [lo, hi] = std::minmax_element(support.begin(), support.end());
    return *lo <= y && y <= *hi;
}

bool interval_rule_1d(const OnePeriodMarket& market) {
    if (market.dim() != 1) {
        throw Error(ErrorCode::DimensionError,
                    "interval rule needs one asset, market has " + std::to_string(market.dim()));
    }
    std::vector<double> values;
    for (const auto& z : market.support()) values.push_back(z[0]);
    return interval_rule_1d(market.initial()[0], values);
}

}  // namespace qsh
