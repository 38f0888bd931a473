#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `serial::` and an OpenMP version in `parallel::` with identical results;
// the tests pin them against each other and bench/ times them.

#include "goalspot/pitch_geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace goalspot::kernels {

/// Like/unlike join tallies on an undirected graph.
struct JoinCounts {
    std::int64_t n11 = 0;
    std::int64_t n00 = 0;
    std::int64_t n01 = 0;

    friend bool operator==(const JoinCounts&, const JoinCounts&) = default;
};

using Edge = std::pair<std::int32_t, std::int32_t>;

JoinCounts count_joins(std::span<const Edge> edges, std::span<const std::uint8_t> labels);

namespace serial {

/// out(i, j) = exp(-phi * |s_i - s_j|)
void exponential_correlation(std::span<const PitchLocation> locs, double phi, Eigen::MatrixXd& out);

/// out(i, j) = exp(-phi * |a_i - b_j|)
void exponential_cross(std::span<const PitchLocation> a, std::span<const PitchLocation> b,
                       double phi, Eigen::MatrixXd& out);

/// counts[k] = number of ordered pairs i != j with |s_i - s_j| <= radii[k].
/// `radii` must be ascending.
std::vector<std::int64_t> pair_counts(std::span<const PitchLocation> pts,
                                      std::span<const double> radii);

/// Indices of the k nearest neighbours of every point (excluding itself),
/// nearest first, ties broken by index.
std::vector<std::vector<std::int32_t>> knn(std::span<const PitchLocation> pts, int k);

/// Join counts for `n_perms` relabelings; permutation b shuffles `labels`
/// with an RNG seeded from (seed, b).
std::vector<JoinCounts> permuted_joins(std::span<const Edge> edges,
                                       std::span<const std::uint8_t> labels, int n_perms,
                                       std::uint64_t seed);

}  // namespace serial

namespace parallel {

void exponential_correlation(std::span<const PitchLocation> locs, double phi, Eigen::MatrixXd& out);
void exponential_cross(std::span<const PitchLocation> a, std::span<const PitchLocation> b,
                       double phi, Eigen::MatrixXd& out);
std::vector<std::int64_t> pair_counts(std::span<const PitchLocation> pts,
                                      std::span<const double> radii);
std::vector<std::vector<std::int32_t>> knn(std::span<const PitchLocation> pts, int k);
std::vector<JoinCounts> permuted_joins(std::span<const Edge> edges,
                                       std::span<const std::uint8_t> labels, int n_perms,
                                       std::uint64_t seed);

}  // namespace parallel

/// Caps OpenMP threads for the parallel kernels; 0 restores the default.
void set_max_threads(int n);
int max_threads();

}  // namespace goalspot::kernels
