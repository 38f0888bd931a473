#pragma once

#include "goalspot/kernels.hpp"
#include "goalspot/pitch_geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace goalspot {

struct Window {
    double x_min = -35.0, x_max = 35.0;
    double y_min = 0.0, y_max = 60.0;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool contains(const PitchLocation& p) const
    {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

struct KFunctionResult {
    std::vector<double> radii;
    std::vector<double> k_hat;
    std::vector<double> k_theo;  // pi a^2
    std::vector<double> envelope_low;
    std::vector<double> envelope_high;
    int n_sims = 0;
};

/// Naive (uncorrected) Ripley K estimate, |W| / n^2 * #{i != j : d_ij <= a},
/// with pointwise min/max envelopes over `n_sims` uniform patterns of the
/// same size in the same window, computed with the same estimator.
KFunctionResult ripley_k(const std::vector<PitchLocation>& points, const Window& window,
                         const std::vector<double>& radii, int n_sims, std::uint64_t seed,
                         bool parallel = true);

std::vector<double> ripley_k_hat(const std::vector<PitchLocation>& points, const Window& window,
                                  const std::vector<double>& radii, bool parallel = true);

struct JoinCountStat {
    double observed = 0.0;
    double null_mean = 0.0;
    double null_sd = 0.0;
    double p_value = 0.0;
};

struct JoinCountResult {
    int k_neighbors = 0;
    kernels::JoinCounts counts;
    std::int64_t total_joins = 0;
    JoinCountStat n11, n00, n01;  // p-values: n11, n00 upper tail; n01 lower tail
    int n_perms = 0;

    /// Test of "more like joins than expected": fewer unlike (0-1) joins.
    bool rejects(double alpha = 0.05) const { return n01.p_value <= alpha; }
};

int default_k_neighbors(std::size_t n);  // floor(sqrt(n)), at least 1

/// Undirected k-NN graph, symmetrized by union, as a sorted edge list.
std::vector<kernels::Edge> knn_graph(const std::vector<PitchLocation>& points, int k,
                                     bool parallel = true);

/// Permutation join-count test on a k-NN graph with fixed label counts.
/// Throws when every label is identical.
JoinCountResult join_count_test(const std::vector<PitchLocation>& points,
                                const std::vector<int>& labels, int k_neighbors, int n_perms,
                                std::uint64_t seed, bool parallel = true);

void write_kfunction_csv(std::ostream& out, const KFunctionResult& k);
void write_joincount_csv(std::ostream& out, const JoinCountResult& jc);

}  // namespace goalspot
