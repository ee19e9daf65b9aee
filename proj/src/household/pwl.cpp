#include "cloudstore/convex_pwl.hpp"

#include <algorithm>

namespace cloudstore::pwl {

namespace {

constexpr double kMinLength = 1e-12;

double x_end_of(double x0, std::span<const Segment> segs)
{
    double x = x0;
    for (const auto& s : segs) x += s.length;
    return x;
}

double eval(double x0, double value0, std::span<const Segment> segs, double x)
{
    double value = value0;
    double pos = x0;
    for (const auto& s : segs) {
        if (x <= pos) break;
        double step = std::min(s.length, x - pos);
        value += step * s.slope;
        pos += s.length;
    }
    return value;
}

void push_merged(std::vector<Segment>& out, Segment s)
{
    if (s.length <= kMinLength) return;
    if (!out.empty() && out.back().slope == s.slope) {
        out.back().length += s.length;
    } else {
        out.push_back(s);
    }
}

}  // namespace

double ConvexPwl::x_end() const { return x_end_of(x0, segments); }
double ConvexPwl::operator()(double x) const { return eval(x0, value0, segments, x); }
double PwlView::x_end() const { return x_end_of(x0, segments); }
double PwlView::operator()(double x) const { return eval(x0, value0, segments, x); }

ConvexPwl infimal_convolution(const PwlView& a, const PwlView& b)
{
    ConvexPwl out;
    out.x0 = a.x0 + b.x0;
    out.value0 = a.value0 + b.value0;
    out.segments.reserve(a.segments.size() + b.segments.size());
    std::size_t i = 0, j = 0;
    while (i < a.segments.size() || j < b.segments.size()) {
        if (j == b.segments.size() || (i < a.segments.size() && a.segments[i].slope <= b.segments[j].slope)) {
            push_merged(out.segments, a.segments[i++]);
        } else {
            push_merged(out.segments, b.segments[j++]);
        }
    }
    return out;
}

ConvexPwl restrict_to(const ConvexPwl& f, double lo, double hi)
{
    ConvexPwl out;
    lo = std::max(lo, f.x0);
    double pos = f.x0;
    double value = f.value0;
    std::size_t k = 0;
    // Advance to lo.
    for (; k < f.segments.size(); ++k) {
        const auto& s = f.segments[k];
        if (pos + s.length > lo) break;
        pos += s.length;
        value += s.length * s.slope;
    }
    double first_remaining = 0.0;
    if (k < f.segments.size()) {
        double used = std::max(0.0, lo - pos);
        value += used * f.segments[k].slope;
        first_remaining = f.segments[k].length - used;
        pos = lo;
    } else {
        // lo is at or beyond the domain end; clamp to the end point.
        lo = pos;
    }
    out.x0 = lo;
    out.value0 = value;
    double cursor = lo;
    for (std::size_t m = k; m < f.segments.size() && cursor < hi; ++m) {
        double len = m == k ? first_remaining : f.segments[m].length;
        len = std::min(len, hi - cursor);
        push_merged(out.segments, {len, f.segments[m].slope});
        cursor += len;
    }
    return out;
}

}  // namespace cloudstore::pwl
