#include "goalspot/kernels.hpp"

#include "goalspot/random.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace goalspot::kernels {

namespace {

int g_max_threads = 0;

int threads()
{
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
}

inline double dist(const PitchLocation& a, const PitchLocation& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

void correlation_row(std::span<const PitchLocation> locs, double phi, Eigen::MatrixXd& out,
                     Eigen::Index i)
{
    out(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < out.cols(); ++j) {
        const double v = std::exp(-phi * dist(locs[static_cast<std::size_t>(i)],
                                              locs[static_cast<std::size_t>(j)]));
        out(i, j) = v;
        out(j, i) = v;
    }
}

// Ordered-pair tally for the pairs (i, j > i) of row i, doubled.
void pair_row(std::span<const PitchLocation> pts, std::span<const double> radii, std::size_t i,
              std::vector<std::int64_t>& hist)
{
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = dist(pts[i], pts[j]);
        const auto it = std::lower_bound(radii.begin(), radii.end(), d);
        if (it != radii.end())
            hist[static_cast<std::size_t>(it - radii.begin())] += 2;
    }
}

std::vector<std::int64_t> cumulate(std::vector<std::int64_t> hist)
{
    std::partial_sum(hist.begin(), hist.end(), hist.begin());
    return hist;
}

std::vector<std::int32_t> knn_row(std::span<const PitchLocation> pts, int k, std::size_t i,
                                  std::vector<std::pair<double, std::int32_t>>& scratch)
{
    scratch.clear();
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i)
            scratch.emplace_back(dist(pts[i], pts[j]), static_cast<std::int32_t>(j));
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), scratch.size());
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kk),
                      scratch.end());
    std::vector<std::int32_t> row(kk);
    for (std::size_t m = 0; m < kk; ++m)
        row[m] = scratch[m].second;
    return row;
}

JoinCounts one_permutation(std::span<const Edge> edges, std::span<const std::uint8_t> labels,
                           std::uint64_t seed, int b, std::vector<std::uint8_t>& work)
{
    work.assign(labels.begin(), labels.end());
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(b));
    std::shuffle(work.begin(), work.end(), rng);
    return count_joins(edges, work);
}

}  // namespace

JoinCounts count_joins(std::span<const Edge> edges, std::span<const std::uint8_t> labels)
{
    JoinCounts c;
    for (const auto& [a, b] : edges) {
        const int s = labels[static_cast<std::size_t>(a)] + labels[static_cast<std::size_t>(b)];
        if (s == 2)
            ++c.n11;
        else if (s == 0)
            ++c.n00;
        else
            ++c.n01;
    }
    return c;
}

void set_max_threads(int n)
{
    g_max_threads = n;
}

int max_threads()
{
    return threads();
}

namespace serial {

void exponential_correlation(std::span<const PitchLocation> locs, double phi, Eigen::MatrixXd& out)
{
    const auto n = static_cast<Eigen::Index>(locs.size());
    out.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        correlation_row(locs, phi, out, i);
}

void exponential_cross(std::span<const PitchLocation> a, std::span<const PitchLocation> b,
                       double phi, Eigen::MatrixXd& out)
{
    out.resize(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::exp(-phi * dist(a[i], b[j]));
}

std::vector<std::int64_t> pair_counts(std::span<const PitchLocation> pts,
                                      std::span<const double> radii)
{
    std::vector<std::int64_t> hist(radii.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        pair_row(pts, radii, i, hist);
    return cumulate(std::move(hist));
}

std::vector<std::vector<std::int32_t>> knn(std::span<const PitchLocation> pts, int k)
{
    std::vector<std::vector<std::int32_t>> out(pts.size());
    std::vector<std::pair<double, std::int32_t>> scratch;
    for (std::size_t i = 0; i < pts.size(); ++i)
        out[i] = knn_row(pts, k, i, scratch);
    return out;
}

std::vector<JoinCounts> permuted_joins(std::span<const Edge> edges,
                                       std::span<const std::uint8_t> labels, int n_perms,
                                       std::uint64_t seed)
{
    std::vector<JoinCounts> out(static_cast<std::size_t>(std::max(n_perms, 0)));
    std::vector<std::uint8_t> work;
    for (int b = 0; b < n_perms; ++b)
        out[static_cast<std::size_t>(b)] = one_permutation(edges, labels, seed, b, work);
    return out;
}

}  // namespace serial

namespace parallel {

void exponential_correlation(std::span<const PitchLocation> locs, double phi, Eigen::MatrixXd& out)
{
    const auto n = static_cast<Eigen::Index>(locs.size());
    out.resize(n, n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads())
    for (Eigen::Index i = 0; i < n; ++i)
        correlation_row(locs, phi, out, i);
}

void exponential_cross(std::span<const PitchLocation> a, std::span<const PitchLocation> b,
                       double phi, Eigen::MatrixXd& out)
{
    out.resize(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    const auto nb = static_cast<std::int64_t>(b.size());
#pragma omp parallel for schedule(static) num_threads(threads())
    for (std::int64_t j = 0; j < nb; ++j)
        for (std::size_t i = 0; i < a.size(); ++i)
            out(static_cast<Eigen::Index>(i), j) =
                std::exp(-phi * dist(a[i], b[static_cast<std::size_t>(j)]));
}

std::vector<std::int64_t> pair_counts(std::span<const PitchLocation> pts,
                                      std::span<const double> radii)
{
    std::vector<std::int64_t> total(radii.size(), 0);
    const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel num_threads(threads())
    {
        std::vector<std::int64_t> local(radii.size(), 0);
#pragma omp for schedule(dynamic, 32) nowait
        for (std::int64_t i = 0; i < n; ++i)
            pair_row(pts, radii, static_cast<std::size_t>(i), local);
#pragma omp critical
        for (std::size_t k = 0; k < total.size(); ++k)
            total[k] += local[k];
    }
    return cumulate(std::move(total));
}

std::vector<std::vector<std::int32_t>> knn(std::span<const PitchLocation> pts, int k)
{
    std::vector<std::vector<std::int32_t>> out(pts.size());
    const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel num_threads(threads())
    {
        std::vector<std::pair<double, std::int32_t>> scratch;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = knn_row(pts, k, static_cast<std::size_t>(i), scratch);
    }
    return out;
}

std::vector<JoinCounts> permuted_joins(std::span<const Edge> edges,
                                       std::span<const std::uint8_t> labels, int n_perms,
                                       std::uint64_t seed)
{
    std::vector<JoinCounts> out(static_cast<std::size_t>(std::max(n_perms, 0)));
#pragma omp parallel num_threads(threads())
    {
        std::vector<std::uint8_t> work;
#pragma omp for schedule(static)
        for (int b = 0; b < n_perms; ++b)
            out[static_cast<std::size_t>(b)] = one_permutation(edges, labels, seed, b, work);
    }
    return out;
}

}  // namespace parallel

}  // namespace goalspot::kernels
