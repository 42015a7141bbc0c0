#ifndef COLDFLEET_CURVE_HPP
#define COLDFLEET_CURVE_HPP

#include <utility>
#include <vector>

#include "coldfleet/errors.hpp"

namespace coldfleet {

// Piecewise-linear curve over (x, y) breakpoints, clamped to the end values
// outside the breakpoint range. Breakpoints must be strictly increasing in x.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;

    explicit PiecewiseLinear(std::vector<std::pair<double, double>> points)
        : points_(std::move(points)) {
        if (points_.empty())
            throw InvalidParameter("piecewise-linear curve needs at least one breakpoint");
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (!(points_[i - 1].first < points_[i].first))
                throw InvalidParameter("piecewise-linear breakpoints must be strictly increasing in x");
        }
    }

    double operator()(double x) const {
        if (x <= points_.front().first) return points_.front().second;
        if (x >= points_.back().first) return points_.back().second;
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (x == points_[i].first) return points_[i].second;  // exact at breakpoints
            if (x < points_[i].first) {
                const auto& [x0, y0] = points_[i - 1];
                const auto& [x1, y1] = points_[i];
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        return points_.back().second;  // unreachable
    }

    const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

}  // namespace coldfleet

#endif  // COLDFLEET_CURVE_HPP
