#pragma once

#include <span>
#include <vector>

namespace cloudstore::pwl {

struct Segment {
    double length;
    double slope;
};

/// Convex piecewise-linear function on [x0, x0 + sum(lengths)], segments in increasing slope.
struct ConvexPwl {
    double x0 = 0.0;
    double value0 = 0.0;
    std::vector<Segment> segments;

    double x_end() const;
    double operator()(double x) const;
};

/// Non-owning view used for value functions packed in a shared pool.
struct PwlView {
    double x0 = 0.0;
    double value0 = 0.0;
    std::span<const Segment> segments;

    double x_end() const;
    double operator()(double x) const;
};

/// (a [] b)(x) = min_y a(y) + b(x - y). Segments with equal slope are merged.
ConvexPwl infimal_convolution(const PwlView& a, const PwlView& b);

/// Restriction to [lo, hi] intersected with the domain. The result may be a single point.
ConvexPwl restrict_to(const ConvexPwl& f, double lo, double hi);

inline PwlView view(const ConvexPwl& f) { return {f.x0, f.value0, f.segments}; }

}  // namespace cloudstore::pwl
