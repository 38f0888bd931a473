#include "goalspot/exploratory_diag.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace goalspot {

namespace {

void check_window(const Window& w)
{
    if (!(w.area() > 0.0))
        throw std::invalid_argument("window area is zero");
}

std::vector<PitchLocation> uniform_pattern(std::size_t n, const Window& w, Rng& rng)
{
    std::vector<PitchLocation> pts(n);
    for (auto& p : pts) {
        p.x = w.x_min + (w.x_max - w.x_min) * uniform01(rng);
        p.y = w.y_min + (w.y_max - w.y_min) * uniform01(rng);
    }
    return pts;
}

JoinCountStat tally(double observed, const std::vector<double>& null, bool upper)
{
    JoinCountStat s;
    s.observed = observed;
    double sum = 0.0, sq = 0.0;
    std::size_t extreme = 0;
    for (double v : null) {
        sum += v;
        sq += v * v;
        if (upper ? v >= observed : v <= observed)
            ++extreme;
    }
    const auto m = static_cast<double>(null.size());
    s.null_mean = m > 0 ? sum / m : 0.0;
    s.null_sd = m > 1 ? std::sqrt(std::max(0.0, (sq - m * s.null_mean * s.null_mean) / (m - 1)))
                      : 0.0;
    s.p_value = (1.0 + static_cast<double>(extreme)) / (m + 1.0);
    return s;
}

}  // namespace

std::vector<double> ripley_k_hat(const std::vector<PitchLocation>& points, const Window& window,
                                 const std::vector<double>& radii, bool parallel)
{
    check_window(window);
    if (points.size() < 2)
        throw std::invalid_argument("Ripley K needs at least two points");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("radii must be ascending");
    const auto counts = parallel ? kernels::parallel::pair_counts(points, radii)
                                 : kernels::serial::pair_counts(points, radii);
    const double n = static_cast<double>(points.size());
    const double scale = window.area() / (n * n);
    std::vector<double> k(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        k[i] = scale * static_cast<double>(counts[i]);
    return k;
}

KFunctionResult ripley_k(const std::vector<PitchLocation>& points, const Window& window,
                         const std::vector<double>& radii, int n_sims, std::uint64_t seed,
                         bool parallel)
{
    KFunctionResult res;
    res.radii = radii;
    res.n_sims = n_sims;
    res.k_hat = ripley_k_hat(points, window, radii, parallel);
    for (double a : radii)
        res.k_theo.push_back(std::numbers::pi * a * a);

    std::vector<std::vector<double>> sims(static_cast<std::size_t>(std::max(n_sims, 0)));
#pragma omp parallel for schedule(dynamic, 1) if (parallel) \
    num_threads(kernels::max_threads())
    for (int s = 0; s < n_sims; ++s) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(s));
        const auto pts = uniform_pattern(points.size(), window, rng);
        sims[static_cast<std::size_t>(s)] = ripley_k_hat(pts, window, radii, false);
    }

    res.envelope_low.assign(radii.size(), 0.0);
    res.envelope_high.assign(radii.size(), 0.0);
    for (std::size_t r = 0; r < radii.size(); ++r) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& k : sims) {
            lo = std::min(lo, k[r]);
            hi = std::max(hi, k[r]);
        }
        res.envelope_low[r] = sims.empty() ? res.k_hat[r] : lo;
        res.envelope_high[r] = sims.empty() ? res.k_hat[r] : hi;
    }
    return res;
}

int default_k_neighbors(std::size_t n)
{
    return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
}

std::vector<kernels::Edge> knn_graph(const std::vector<PitchLocation>& points, int k,
                                     bool parallel)
{
    if (k < 1)
        throw std::invalid_argument("k must be at least 1");
    const auto nn = parallel ? kernels::parallel::knn(points, k) : kernels::serial::knn(points, k);
    std::vector<kernels::Edge> edges;
    for (std::size_t i = 0; i < nn.size(); ++i)
        for (auto j : nn[i]) {
            const auto a = static_cast<std::int32_t>(i);
            edges.emplace_back(std::min(a, j), std::max(a, j));
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

JoinCountResult join_count_test(const std::vector<PitchLocation>& points,
                                const std::vector<int>& labels, int k_neighbors, int n_perms,
                                std::uint64_t seed, bool parallel)
{
    if (labels.size() != points.size())
        throw std::invalid_argument("labels and points differ in length");
    std::vector<std::uint8_t> lab(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw std::invalid_argument("labels must be binary");
        lab[i] = static_cast<std::uint8_t>(labels[i]);
    }
    const auto ones = std::count(lab.begin(), lab.end(), std::uint8_t{1});
    if (ones == 0 || ones == static_cast<std::ptrdiff_t>(lab.size()))
        throw std::invalid_argument("degenerate join-count test: all labels identical");

    JoinCountResult res;
    res.k_neighbors = k_neighbors;
    res.n_perms = n_perms;
    const auto edges = knn_graph(points, k_neighbors, parallel);
    res.total_joins = static_cast<std::int64_t>(edges.size());
    res.counts = kernels::count_joins(edges, lab);

    const auto perms = parallel ? kernels::parallel::permuted_joins(edges, lab, n_perms, seed)
                                : kernels::serial::permuted_joins(edges, lab, n_perms, seed);
    std::vector<double> n11, n00, n01;
    for (const auto& c : perms) {
        n11.push_back(static_cast<double>(c.n11));
        n00.push_back(static_cast<double>(c.n00));
        n01.push_back(static_cast<double>(c.n01));
    }
    res.n11 = tally(static_cast<double>(res.counts.n11), n11, true);
    res.n00 = tally(static_cast<double>(res.counts.n00), n00, true);
    res.n01 = tally(static_cast<double>(res.counts.n01), n01, false);
    return res;
}

void write_kfunction_csv(std::ostream& out, const KFunctionResult& k)
{
    out << "radius,k_hat,k_theo,lo,hi\n";
    for (std::size_t i = 0; i < k.radii.size(); ++i)
        out << csv::num(k.radii[i]) << ',' << csv::num(k.k_hat[i]) << ',' << csv::num(k.k_theo[i])
            << ',' << csv::num(k.envelope_low[i]) << ',' << csv::num(k.envelope_high[i]) << '\n';
}

void write_joincount_csv(std::ostream& out, const JoinCountResult& jc)
{
    out << "statistic,observed,null_mean,null_sd,p_value,k_neighbors,n_perms,total_joins\n";
    const auto row = [&](const char* name, const JoinCountStat& s) {
        out << name << ',' << csv::num(s.observed) << ',' << csv::num(s.null_mean) << ','
            << csv::num(s.null_sd) << ',' << csv::num(s.p_value) << ',' << jc.k_neighbors << ','
            << jc.n_perms << ',' << jc.total_joins << '\n';
    };
    row("n11", jc.n11);
    row("n00", jc.n00);
    row("n01", jc.n01);
}

}  // namespace goalspot
