#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qsh {

/// L-infinity tolerance under which two points are considered the same.
inline constexpr double kDedupTolerance = 1e-12;

/// A point of R^d with finite coordinates.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    /// Zero vector of dimension `dim`.
    static Point zero(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);

double dot(const Point& a, const Point& b);
double linf_distance(const Point& a, const Point& b);
double linf_norm(const Point& a);
bool lex_less(const Point& a, const Point& b);

/// Deduplicated finite point set, sorted lexicographically.
///
/// Construction keeps the first representative of each L-infinity cluster of
/// radius kDedupTolerance, then sorts. All points share one dimension.
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::vector<Point> points);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] std::size_t dim() const noexcept {
        return points_.empty() ? 0 : points_.front().dim();
    }
    [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }
    [[nodiscard]] const Point& operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
    [[nodiscard]] auto end() const noexcept { return points_.end(); }

    /// Index of the stored point within kDedupTolerance of `p`, or size().
    [[nodiscard]] std::size_t find(const Point& p) const;

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::vector<Point> points_;
};

}  // namespace qsh
