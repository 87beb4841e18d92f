#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lionman {

/// Coordinate tuple. Interpretation (metric, constraints) comes from a Space.
struct Point {
    std::vector<double> coords;

    Point() = default;
    Point(std::initializer_list<double> xs) : coords(xs) {}
    explicit Point(std::vector<double> xs) : coords(std::move(xs)) {}

    std::size_t dim() const { return coords.size(); }
    double& operator[](std::size_t i) { return coords[i]; }
    double operator[](std::size_t i) const { return coords[i]; }

    bool operator==(const Point&) const = default;
};

} // namespace lionman
