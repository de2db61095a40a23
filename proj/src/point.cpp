#include "qsh/point.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qsh {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyRows: return "EmptyRows";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvalidMeasure: return "InvalidMeasure";
        case ErrorCode::EmptyFamily: return "EmptyFamily";
        case ErrorCode::MissingValue: return "MissingValue";
        case ErrorCode::InvalidMarket: return "InvalidMarket";
        case ErrorCode::ClaimMismatch: return "ClaimMismatch";
        case ErrorCode::DimensionError: return "DimensionError";
        case ErrorCode::LeafNode: return "LeafNode";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::RaggedDepth: return "RaggedDepth";
        case ErrorCode::PriorArityMismatch: return "PriorArityMismatch";
        case ErrorCode::NegativePrice: return "NegativePrice";
        case ErrorCode::InvalidTree: return "InvalidTree";
        case ErrorCode::MissingPayoff: return "MissingPayoff";
        case ErrorCode::GlobalIPDetected: return "GlobalIPDetected";
        case ErrorCode::ScaleExceeded: return "ScaleExceeded";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InternalInvariant: return "InternalInvariant";
    }
    return "Unknown";
}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorCode::NonFiniteValue, "point coordinate is not finite");
        }
    }
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::vector<double>(coords)) {}

Point Point::zero(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

namespace {
void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "points of dimension " + std::to_string(a.dim()) + " and " +
                        std::to_string(b.dim()));
    }
}
}  // namespace

Point operator+(const Point& a, const Point& b) {
    require_same_dim(a, b);
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return Point(std::move(out));
}

Point operator-(const Point& a, const Point& b) {
    require_same_dim(a, b);
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return Point(std::move(out));
}

Point operator*(double s, const Point& a) {
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
    return Point(std::move(out));
}

double dot(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double linf_distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double linf_norm(const Point& a) {
    double m = 0.0;
    for (double c : a.coords()) m = std::max(m, std::abs(c));
    return m;
}

bool lex_less(const Point& a, const Point& b) {
    auto ca = a.coords();
    auto cb = b.coords();
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

SupportSet::SupportSet(std::vector<Point> points) {
    for (auto& p : points) {
        if (!points_.empty() && p.dim() != points_.front().dim()) {
            throw Error(ErrorCode::DimensionMismatch, "support points differ in dimension");
        }
        if (p.dim() == 0) {
            throw Error(ErrorCode::DimensionMismatch, "support point of dimension 0");
        }
        bool duplicate = std::any_of(points_.begin(), points_.end(), [&](const Point& q) {
            return linf_distance(p, q) <= kDedupTolerance;
        });
        if (!duplicate) points_.push_back(std::move(p));
    }
    std::stable_sort(points_.begin(), points_.end(), lex_less);
}

std::size_t SupportSet::find(const Point& p) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].dim() == p.dim() && linf_distance(points_[i], p) <= kDedupTolerance) {
            return i;
        }
    }
    return points_.size();
}

}  // namespace qsh
