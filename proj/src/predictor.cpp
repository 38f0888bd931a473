#include "goalspot/predictor.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace goalspot {

namespace {

constexpr double kNegativeVarianceTolerance = 1e-10;
constexpr Eigen::Index kBlock = 128;

double checked_unit_variance(double v)
{
    if (v < -kNegativeVarianceTolerance)
        throw KernelError("negative kriging variance " + std::to_string(v));
    return std::max(v, 0.0);
}

Eigen::VectorXd request_row(const PosteriorDraws& draws, const PredictionRequest& req,
                            const GeometryConfig& geometry)
{
    const auto p = draws.theta.cols();
    if (req.x_row) {
        if (req.x_row->size() != p)
            throw std::invalid_argument("covariate mismatch: expected " + std::to_string(p) +
                                        " design columns, got " +
                                        std::to_string(req.x_row->size()));
        return *req.x_row;
    }
    const Eigen::VectorXd full = design_row(req.location, req.situation, req.subset, geometry);
    if (draws.column_names.empty()) {
        if (full.size() != p)
            throw std::invalid_argument("covariate mismatch with fitted design");
        return full;
    }
    return project_row(full, req.subset, draws.column_names);
}

// Per-draw kriging and probit link for one location.
PredictionResult finish(const PosteriorDraws& draws, const Eigen::VectorXd& w_means,
                        double unit_variance, const Eigen::VectorXd& linear, Rng& rng,
                        const PredictOptions& opts)
{
    PredictionResult res;
    const auto ns = draws.n_samples();
    if (opts.keep_draws)
        res.p_draws.reserve(static_cast<std::size_t>(ns));
    double sum = 0.0;
    for (Eigen::Index d = 0; d < ns; ++d) {
        const double s2 = draws.sigma2[d];
        const double w_new = w_means[d] + std::sqrt(s2 * unit_variance) * standard_normal(rng);
        const double eta = linear[d] + w_new;
        const double p = normal_cdf(eta / std::sqrt(s2));
        sum += p;
        if (opts.keep_draws)
            res.p_draws.push_back(p);
        if (opts.sample_outcome) {
            const double r_new = eta + std::sqrt(s2) * standard_normal(rng);
            res.y_draws.push_back(r_new > 0.0 ? 1 : 0);
        }
    }
    res.p_hat = ns > 0 ? sum / static_cast<double>(ns) : 0.0;
    return res;
}

void check_fit(const PosteriorDraws& draws, const SpatialKernel& kernel)
{
    if (draws.w.cols() != kernel.size())
        throw std::invalid_argument("posterior draws and kernel come from different fits");
    if (draws.n_samples() < 1)
        throw std::invalid_argument("no posterior draws");
}

void predict_block(const PosteriorDraws& draws, const SpatialKernel& kernel,
                   const std::vector<PredictionRequest>& requests, std::uint64_t seed,
                   const PredictOptions& opts, Eigen::Index begin, Eigen::Index end,
                   std::vector<PredictionResult>& out)
{
    const auto g = end - begin;
    const auto p = draws.theta.cols();
    std::vector<PitchLocation> locs;
    Eigen::MatrixXd rows(p, g);
    for (Eigen::Index k = 0; k < g; ++k) {
        const auto& req = requests[static_cast<std::size_t>(begin + k)];
        locs.push_back(req.location);
        rows.col(k) = request_row(draws, req, opts.geometry);
    }

    Eigen::MatrixXd c;
    kernels::serial::exponential_cross(kernel.locations, locs, kernel.phi, c);
    const auto tri = kernel.chol_sigma_w.triangularView<Eigen::Lower>();
    const Eigen::MatrixXd u = tri.solve(c);
    const Eigen::MatrixXd v = tri.transpose().solve(u);
    const Eigen::MatrixXd means = draws.w * v;       // ns x g
    const Eigen::MatrixXd linear = draws.theta * rows;  // ns x g

    for (Eigen::Index k = 0; k < g; ++k) {
        const double unit = checked_unit_variance(1.0 - u.col(k).squaredNorm());
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(begin + k));
        out[static_cast<std::size_t>(begin + k)] =
            finish(draws, means.col(k), unit, linear.col(k), rng, opts);
    }
}

}  // namespace

KrigingWeights kriging_weights(const SpatialKernel& kernel, const PitchLocation& s_new)
{
    const Eigen::VectorXd c = cross_covariance(kernel, s_new);
    const auto tri = kernel.chol_sigma_w.triangularView<Eigen::Lower>();
    const Eigen::VectorXd u = tri.solve(c);
    KrigingWeights kw;
    kw.weights = tri.transpose().solve(u);
    kw.unit_variance = checked_unit_variance(1.0 - u.squaredNorm());
    return kw;
}

KrigingMoments kriging_moments(const SpatialKernel& kernel, const Eigen::VectorXd& w,
                               double sigma2, const PitchLocation& s_new)
{
    const auto kw = kriging_weights(kernel, s_new);
    return {kw.weights.dot(w), sigma2 * kw.unit_variance};
}

double krige_w(const SpatialKernel& kernel, const Eigen::VectorXd& w_draw, double sigma2_draw,
               const PitchLocation& s_new, Rng& rng)
{
    const auto m = kriging_moments(kernel, w_draw, sigma2_draw, s_new);
    return m.mean + std::sqrt(m.variance) * standard_normal(rng);
}

PredictionResult predict_probability(const PosteriorDraws& draws, const SpatialKernel& kernel,
                                     const PredictionRequest& req, Rng& rng,
                                     const PredictOptions& opts)
{
    check_fit(draws, kernel);
    const Eigen::VectorXd x = request_row(draws, req, opts.geometry);
    const auto kw = kriging_weights(kernel, req.location);
    const Eigen::VectorXd means = draws.w * kw.weights;
    const Eigen::VectorXd linear = draws.theta * x;
    return finish(draws, means, kw.unit_variance, linear, rng, opts);
}

std::vector<PredictionResult> predict_batch(const PosteriorDraws& draws,
                                            const SpatialKernel& kernel,
                                            const std::vector<PredictionRequest>& requests,
                                            std::uint64_t seed, const PredictOptions& opts)
{
    check_fit(draws, kernel);
    std::vector<PredictionResult> out(requests.size());
    const auto n = static_cast<Eigen::Index>(requests.size());
    const Eigen::Index n_blocks = (n + kBlock - 1) / kBlock;
    if (!opts.parallel) {
        for (Eigen::Index b = 0; b < n_blocks; ++b)
            predict_block(draws, kernel, requests, seed, opts, b * kBlock,
                          std::min(n, (b + 1) * kBlock), out);
        return out;
    }
    std::string error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::max_threads())
    for (Eigen::Index b = 0; b < n_blocks; ++b) {
        try {
            predict_block(draws, kernel, requests, seed, opts, b * kBlock,
                          std::min(n, (b + 1) * kBlock), out);
        }
        catch (const std::exception& e) {
#pragma omp critical
            if (error.empty())
                error = e.what();
        }
    }
    if (!error.empty())
        throw std::runtime_error(error);
    return out;
}

std::vector<double> predict_design(const PosteriorDraws& draws, const SpatialKernel& kernel,
                                   const EncodedDesign& design, std::uint64_t seed,
                                   const PredictOptions& opts)
{
    std::vector<PredictionRequest> reqs(static_cast<std::size_t>(design.rows()));
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
        auto& r = reqs[static_cast<std::size_t>(i)];
        r.location = design.locations[static_cast<std::size_t>(i)];
        r.subset = design.subset_tag;
        r.x_row = design.X.row(i).transpose();
    }
    const auto res = predict_batch(draws, kernel, reqs, seed, opts);
    std::vector<double> p(res.size());
    std::transform(res.begin(), res.end(), p.begin(), [](const auto& r) { return r.p_hat; });
    return p;
}

HeatmapGrid heatmap_grid(const PosteriorDraws& draws, const SpatialKernel& kernel,
                         const GridSpec& grid, const Situation& baseline, SubsetTag subset,
                         std::uint64_t seed, const PredictOptions& opts)
{
    if (!(grid.step > 0.0) || grid.x_max < grid.x_min || grid.y_max < grid.y_min)
        throw std::invalid_argument("invalid grid specification");
    if (grid.y_min < 0.0 || grid.y_max > opts.geometry.half_line())
        throw std::invalid_argument("heat-map grid extends beyond the half line");

    HeatmapGrid out;
    const auto steps = [&](double lo, double hi) {
        std::vector<double> v;
        const auto n = static_cast<long>(std::floor((hi - lo) / grid.step + 1e-9));
        for (long k = 0; k <= n; ++k)
            v.push_back(lo + static_cast<double>(k) * grid.step);
        return v;
    };
    out.xs = steps(grid.x_min, grid.x_max);
    out.ys = steps(grid.y_min, grid.y_max);

    std::vector<PredictionRequest> reqs;
    reqs.reserve(out.xs.size() * out.ys.size());
    for (double y : out.ys)
        for (double x : out.xs) {
            PredictionRequest r;
            r.location = {x, y};
            if (x == 0.0 && y == 0.0)
                r.location.y = 1e-6 * grid.step;
            r.situation = baseline;
            r.subset = subset;
            reqs.push_back(r);
        }
    const auto res = predict_batch(draws, kernel, reqs, seed, opts);
    out.p_hat.resize(static_cast<Eigen::Index>(out.ys.size()),
                     static_cast<Eigen::Index>(out.xs.size()));
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < out.p_hat.rows(); ++i)
        for (Eigen::Index j = 0; j < out.p_hat.cols(); ++j)
            out.p_hat(i, j) = res[k++].p_hat;
    return out;
}

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid)
{
    out << "x,y,p_hat\n";
    for (std::size_t i = 0; i < grid.ys.size(); ++i)
        for (std::size_t j = 0; j < grid.xs.size(); ++j)
            out << csv::num(grid.xs[j]) << ',' << csv::num(grid.ys[i]) << ','
                << csv::num(grid.p_hat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << '\n';
}

void write_heatmap_pgm(std::ostream& out, const HeatmapGrid& grid)
{
    out << "P2\n" << grid.xs.size() << ' ' << grid.ys.size() << "\n255\n";
    for (auto i = grid.p_hat.rows() - 1; i >= 0; --i) {
        for (Eigen::Index j = 0; j < grid.p_hat.cols(); ++j) {
            const double p = std::clamp(grid.p_hat(i, j), 0.0, 1.0);
            out << (j ? " " : "") << static_cast<int>(std::lround(255.0 * p));
        }
        out << '\n';
    }
}

}  // namespace goalspot
