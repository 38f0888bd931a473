#pragma once

#include "goalspot/random.hpp"
#include "goalspot/shot_ingest.hpp"
#include "goalspot/spatial_kernel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace goalspot {

/// Inverse-gamma prior on the common variance. Only theta / sigma is identified
/// by binary data; the sigma2 marginal is IG(a - p/2, b), proper when a > p/2.
struct PriorConfig {
    double a = 2.0;
    double b = 1.0;

    void validate() const;
};

struct ChainConfig {
    int burn_in = 10000;
    int n_samples = 500;
    int thin = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quantities of the design that stay fixed for the whole chain.
struct DesignPrecompute {
    Eigen::MatrixXd xtx_inv;       // (X'X)^{-1}
    Eigen::MatrixXd chol_xtx_inv;  // lower factor of (X'X)^{-1}
    Eigen::MatrixXd projector;     // (X'X)^{-1} X'
};

/// Fails with SamplerError naming the collinear columns when X is rank deficient.
DesignPrecompute precompute_design(const Eigen::MatrixXd& X,
                                   const std::vector<std::string>& column_names = {});

struct PosteriorDraws {
    std::vector<std::string> column_names;
    Eigen::MatrixXd theta;   // n_samples x p
    Eigen::VectorXd sigma2;  // n_samples
    Eigen::MatrixXd w;       // n_samples x N
    Eigen::VectorXd r_last;  // N
    std::uint64_t seed = 0;
    int burn_in = 0;
    int thin = 1;
    double elapsed_seconds = 0.0;

    Eigen::Index n_samples() const { return theta.rows(); }
};

// Single conditional updates. Each is an exact draw from its full conditional.

double draw_sigma2(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& w,
                   const SpatialKernel& kernel, const PriorConfig& prior, Rng& rng);

/// Rate of the inverse-gamma conditional: b + |r - X theta - w|^2 / 2 + w' S^{-1} w / 2.
double sigma2_rate(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& w,
                   const SpatialKernel& kernel, const PriorConfig& prior);

Eigen::VectorXd draw_theta(const Eigen::VectorXd& r, const Eigen::VectorXd& w,
                           const DesignPrecompute& pre, double sigma2, Rng& rng);

Eigen::VectorXd draw_w(const Eigen::VectorXd& r, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& theta, const SpatialKernel& kernel, double sigma2,
                       Rng& rng);

void draw_latent(const Eigen::VectorXd& Y, const Eigen::VectorXd& alpha, double sigma2,
                 Eigen::VectorXd& r, Rng& rng);

/// Runs burn_in + n_samples * thin sweeps in the order r, theta, w, sigma2.
PosteriorDraws run_chain(const EncodedDesign& design, const SpatialKernel& kernel,
                         const PriorConfig& prior, const ChainConfig& cfg);

/// Independent chains on shared read-only inputs; chain c uses seed
/// derive_seed(cfg.seed, c). Runs concurrently when OpenMP is available.
std::vector<PosteriorDraws> run_chains(const EncodedDesign& design, const SpatialKernel& kernel,
                                       const PriorConfig& prior, const ChainConfig& cfg,
                                       int n_chains);

struct ParameterSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct FitSummary {
    std::vector<ParameterSummary> rows;  // theta columns, then sigma2
};

/// Mean, SD and equal-tailed 95% interval (linearly interpolated quantiles).
FitSummary summarize(const PosteriorDraws& draws);
ParameterSummary summarize_values(const std::string& name, const Eigen::VectorXd& values);

double empirical_quantile(std::vector<double> values, double q);

void write_summary_csv(std::ostream& out, const FitSummary& summary);
void write_draws_csv(std::ostream& out, const PosteriorDraws& draws);
void write_w_draws_csv(std::ostream& out, const PosteriorDraws& draws);

/// Reads the files written above back into a draws object.
PosteriorDraws read_draws_csv(std::istream& theta_in, std::istream& w_in);

}  // namespace goalspot
