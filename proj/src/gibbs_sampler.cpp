#include "goalspot/gibbs_sampler.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace goalspot {

void PriorConfig::validate() const
{
    if (!(a > 1.0))
        throw std::invalid_argument("prior shape a must exceed 1");
    if (!(b > 0.0))
        throw std::invalid_argument("prior rate b must be positive");
}

void ChainConfig::validate() const
{
    if (burn_in < 0)
        throw std::invalid_argument("burn-in must be nonnegative");
    if (n_samples < 1)
        throw std::invalid_argument("at least one retained sample is required");
    if (thin < 1)
        throw std::invalid_argument("thin must be at least 1");
}

DesignPrecompute precompute_design(const Eigen::MatrixXd& X,
                                   const std::vector<std::string>& column_names)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        std::ostringstream msg;
        msg << "rank-deficient design (rank " << qr.rank() << " of " << X.cols()
            << "); collinear columns:";
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < X.cols(); ++k) {
            const auto c = perm[k];
            msg << ' '
                << (static_cast<std::size_t>(c) < column_names.size()
                        ? column_names[static_cast<std::size_t>(c)]
                        : std::to_string(c));
        }
        throw SamplerError(msg.str());
    }

    DesignPrecompute pre;
    const Eigen::MatrixXd xtx = X.transpose() * X;
    Eigen::LLT<Eigen::MatrixXd> llt(xtx);
    if (llt.info() != Eigen::Success)
        throw SamplerError("X'X is not positive definite");
    pre.xtx_inv = llt.solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    pre.xtx_inv = 0.5 * (pre.xtx_inv + pre.xtx_inv.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> inv_llt(pre.xtx_inv);
    if (inv_llt.info() != Eigen::Success)
        throw SamplerError("(X'X)^{-1} is not positive definite");
    pre.chol_xtx_inv = inv_llt.matrixL();
    pre.projector = pre.xtx_inv * X.transpose();
    return pre;
}

double sigma2_rate(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& w,
                   const SpatialKernel& kernel, const PriorConfig& prior)
{
    const Eigen::VectorXd resid = r - X * theta - w;
    const double quad = w.dot(kernel.sigma_w_inv * w);
    return prior.b + 0.5 * resid.squaredNorm() + 0.5 * quad;
}

double draw_sigma2(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& w,
                   const SpatialKernel& kernel, const PriorConfig& prior, Rng& rng)
{
    const double rate = sigma2_rate(r, X, theta, w, kernel, prior);
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw SamplerError("nonpositive inverse-gamma rate");
    const double shape = prior.a + static_cast<double>(r.size());
    return sample_inverse_gamma(shape, rate, rng);
}

Eigen::VectorXd draw_theta(const Eigen::VectorXd& r, const Eigen::VectorXd& w,
                           const DesignPrecompute& pre, double sigma2, Rng& rng)
{
    const Eigen::Index p = pre.xtx_inv.rows();
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k)
        z[k] = standard_normal(rng);
    Eigen::VectorXd theta = pre.projector * (r - w);
    theta.noalias() += std::sqrt(sigma2) * (pre.chol_xtx_inv * z);
    return theta;
}

Eigen::VectorXd draw_w(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& theta, const SpatialKernel& kernel, double sigma2,
                       Rng& rng)
{
    const Eigen::Index n = kernel.size();
    Eigen::VectorXd z(n);
    for (Eigen::Index k = 0; k < n; ++k)
        z[k] = standard_normal(rng);
    const Eigen::VectorXd resid = r - X * theta;
    Eigen::VectorXd w = kernel.m.selfadjointView<Eigen::Lower>() * resid;
    Eigen::VectorXd noise = kernel.chol_m.triangularView<Eigen::Lower>() * z;
    w.noalias() += std::sqrt(sigma2) * noise;
    return w;
}

void draw_latent(const Eigen::VectorXd& Y, const Eigen::VectorXd& alpha, double sigma2,
                 Eigen::VectorXd& r, Rng& rng)
{
    r.resize(Y.size());
    for (Eigen::Index i = 0; i < Y.size(); ++i)
        r[i] = sample_truncated_normal(
            alpha[i], sigma2, Y[i] > 0.5 ? TruncationSide::positive : TruncationSide::negative,
            rng);
}

PosteriorDraws run_chain(const EncodedDesign& design, const SpatialKernel& kernel,
                         const PriorConfig& prior, const ChainConfig& cfg)
{
    prior.validate();
    cfg.validate();
    const Eigen::MatrixXd& X = design.X;
    const Eigen::VectorXd& Y = design.Y;
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (Y.size() != n || kernel.size() != n)
        throw SamplerError("design and kernel sizes disagree");

    const auto start = std::chrono::steady_clock::now();
    const DesignPrecompute pre = precompute_design(X, design.column_names);

    Rng rng(cfg.seed);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    double sigma2 = 1.0;
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i)
        r[i] = Y[i] > 0.5 ? 0.5 : -0.5;

    PosteriorDraws out;
    out.column_names = design.column_names;
    out.theta.resize(cfg.n_samples, p);
    out.sigma2.resize(cfg.n_samples);
    out.w.resize(cfg.n_samples, n);
    out.seed = cfg.seed;
    out.burn_in = cfg.burn_in;
    out.thin = cfg.thin;

    const long total = static_cast<long>(cfg.burn_in) +
                       static_cast<long>(cfg.n_samples) * static_cast<long>(cfg.thin);
    Eigen::VectorXd alpha(n);
    Eigen::Index kept = 0;
    for (long sweep = 0; sweep < total; ++sweep) {
        alpha.noalias() = X * theta;
        alpha += w;
        draw_latent(Y, alpha, sigma2, r, rng);
        theta = draw_theta(r, w, pre, sigma2, rng);
        w = draw_w(r, X, theta, kernel, sigma2, rng);
        sigma2 = draw_sigma2(r, X, theta, w, kernel, prior, rng);

        if (!std::isfinite(sigma2) || !theta.allFinite() || !w.allFinite() || !r.allFinite())
            throw SamplerError("non-finite sampler state at sweep " + std::to_string(sweep));

        const long after = sweep - cfg.burn_in;
        if (after >= 0 && (after + 1) % cfg.thin == 0) {
            out.theta.row(kept) = theta.transpose();
            out.sigma2[kept] = sigma2;
            out.w.row(kept) = w.transpose();
            ++kept;
        }
    }
    out.r_last = r;
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<PosteriorDraws> run_chains(const EncodedDesign& design, const SpatialKernel& kernel,
                                       const PriorConfig& prior, const ChainConfig& cfg,
                                       int n_chains)
{
    if (n_chains < 1)
        throw std::invalid_argument("need at least one chain");
    std::vector<PosteriorDraws> out(static_cast<std::size_t>(n_chains));
    std::vector<std::string> errors(out.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::max_threads())
    for (int c = 0; c < n_chains; ++c) {
        ChainConfig cc = cfg;
        cc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
        try {
            out[static_cast<std::size_t>(c)] = run_chain(design, kernel, prior, cc);
        }
        catch (const std::exception& e) {
            errors[static_cast<std::size_t>(c)] = e.what();
        }
    }
    for (std::size_t c = 0; c < errors.size(); ++c)
        if (!errors[c].empty())
            throw SamplerError("chain " + std::to_string(c) + ": " + errors[c]);
    return out;
}

double empirical_quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ParameterSummary summarize_values(const std::string& name, const Eigen::VectorXd& values)
{
    ParameterSummary s;
    s.name = name;
    const auto n = values.size();
    s.mean = values.mean();
    if (n >= 2)
        s.sd = std::sqrt((values.array() - s.mean).square().sum() / static_cast<double>(n - 1));
    std::vector<double> v(values.data(), values.data() + n);
    s.lower = empirical_quantile(v, 0.025);
    s.upper = empirical_quantile(v, 0.975);
    // Rounding in the mean can leave it a hair outside a degenerate interval.
    s.lower = std::min(s.lower, s.mean);
    s.upper = std::max(s.upper, s.mean);
    return s;
}

FitSummary summarize(const PosteriorDraws& draws)
{
    if (draws.n_samples() < 2)
        throw std::invalid_argument("summary needs at least two samples");
    FitSummary out;
    for (Eigen::Index j = 0; j < draws.theta.cols(); ++j) {
        const auto name = static_cast<std::size_t>(j) < draws.column_names.size()
                              ? draws.column_names[static_cast<std::size_t>(j)]
                              : "theta" + std::to_string(j);
        out.rows.push_back(summarize_values(name, draws.theta.col(j)));
    }
    out.rows.push_back(summarize_values("sigma2", draws.sigma2));
    return out;
}

void write_summary_csv(std::ostream& out, const FitSummary& summary)
{
    out << "parameter,estimate,standard_error,ci_lower,ci_upper\n";
    for (const auto& r : summary.rows)
        out << r.name << ',' << csv::num(r.mean) << ',' << csv::num(r.sd) << ','
            << csv::num(r.lower) << ',' << csv::num(r.upper) << '\n';
}

void write_draws_csv(std::ostream& out, const PosteriorDraws& draws)
{
    for (const auto& name : draws.column_names)
        out << name << ',';
    out << "sigma2\n";
    for (Eigen::Index s = 0; s < draws.n_samples(); ++s) {
        for (Eigen::Index j = 0; j < draws.theta.cols(); ++j)
            out << csv::num(draws.theta(s, j)) << ',';
        out << csv::num(draws.sigma2[s]) << '\n';
    }
}

void write_w_draws_csv(std::ostream& out, const PosteriorDraws& draws)
{
    for (Eigen::Index i = 0; i < draws.w.cols(); ++i)
        out << (i ? "," : "") << 'w' << i;
    out << '\n';
    for (Eigen::Index s = 0; s < draws.n_samples(); ++s) {
        for (Eigen::Index i = 0; i < draws.w.cols(); ++i)
            out << (i ? "," : "") << csv::num(draws.w(s, i));
        out << '\n';
    }
}

PosteriorDraws read_draws_csv(std::istream& theta_in, std::istream& w_in)
{
    const auto theta_table = csv::read_table(theta_in);
    const auto w_table = csv::read_table(w_in);
    if (theta_table.header.empty() || theta_table.header.back() != "sigma2")
        throw std::runtime_error("draws table must end with a sigma2 column");
    if (theta_table.rows.size() != w_table.rows.size())
        throw std::runtime_error("theta and w draw counts differ");

    PosteriorDraws d;
    d.column_names.assign(theta_table.header.begin(), theta_table.header.end() - 1);
    const auto ns = static_cast<Eigen::Index>(theta_table.rows.size());
    const auto p = static_cast<Eigen::Index>(d.column_names.size());
    const auto n = static_cast<Eigen::Index>(w_table.header.size());
    d.theta.resize(ns, p);
    d.sigma2.resize(ns);
    d.w.resize(ns, n);
    for (Eigen::Index s = 0; s < ns; ++s) {
        const auto& row = theta_table.rows[static_cast<std::size_t>(s)];
        const auto& wrow = w_table.rows[static_cast<std::size_t>(s)];
        if (static_cast<Eigen::Index>(row.size()) != p + 1 ||
            static_cast<Eigen::Index>(wrow.size()) != n)
            throw std::runtime_error("ragged draws table");
        for (Eigen::Index j = 0; j < p; ++j)
            d.theta(s, j) = csv::to_double(row[static_cast<std::size_t>(j)]);
        d.sigma2[s] = csv::to_double(row.back());
        for (Eigen::Index i = 0; i < n; ++i)
            d.w(s, i) = csv::to_double(wrow[static_cast<std::size_t>(i)]);
    }
    return d;
}

}  // namespace goalspot
