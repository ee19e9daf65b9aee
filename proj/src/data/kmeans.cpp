#include "cloudstore/core/errors.hpp"
#include "cloudstore/data.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace cloudstore::data {

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options)
{
    if (points.empty()) throw DomainError("kmeans: no points");
    if (k == 0 || k > points.size()) throw DomainError("kmeans: k must be in [1, number of points]");
    const std::size_t n = points.size();

    KMeansResult r;
    std::mt19937_64 rng(seed);
    r.centers.push_back(points[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (r.centers.size() < k) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], sq_distance(points[i], r.centers.back()));
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far = i;
            }
        }
        r.centers.push_back(points[far]);
    }

    r.assignment.assign(n, 0);
    double previous = std::numeric_limits<double>::infinity();
    for (r.iterations = 1; r.iterations <= options.max_iterations; ++r.iterations) {
        r.inertia = 0.0;
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double d = sq_distance(points[i], r.centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            changed = changed || r.assignment[i] != best || r.iterations == 1;
            r.assignment[i] = best;
            r.inertia += best_d;
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(points.front().size(), 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto c = r.assignment[i];
            counts[c]++;
            for (std::size_t d = 0; d < points[i].size(); ++d) sums[c][d] += points[i][d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // keep an empty cluster's center in place
            for (auto& v : sums[c]) v /= static_cast<double>(counts[c]);
            r.centers[c] = std::move(sums[c]);
        }
        bool flat = std::isfinite(previous) && std::abs(previous - r.inertia) <= options.inertia_tolerance * previous;
        if (!changed || flat) return r;
        previous = r.inertia;
    }
    throw DomainError("kmeans did not converge in " + std::to_string(options.max_iterations) +
                      " iterations (last inertia " + std::to_string(r.inertia) + ")");
}

}  // namespace cloudstore::data
