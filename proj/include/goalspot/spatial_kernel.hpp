#pragma once

#include "goalspot/pitch_geometry.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace goalspot {

class KernelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exponential-decay correlation over a fixed set of shot locations, with the
/// factorizations the sampler and predictor reuse. Built once per phi.
struct SpatialKernel {
    double phi = 0.0;
    std::vector<PitchLocation> locations;
    Eigen::MatrixXd sigma_w;       // exp(-phi * d_ij)
    Eigen::MatrixXd chol_sigma_w;  // lower triangular
    Eigen::MatrixXd sigma_w_inv;
    Eigen::MatrixXd m;             // (I + sigma_w^{-1})^{-1}
    Eigen::MatrixXd chol_m;        // lower triangular
    bool jittered = false;

    Eigen::Index size() const { return sigma_w.rows(); }
};

struct KernelOptions {
    bool parallel = true;
    double jitter = 1e-8;
};

/// Throws KernelError naming the first coincident pair, or when a Cholesky
/// factorization fails after one jitter retry.
SpatialKernel build_kernel(const std::vector<PitchLocation>& locations, double phi,
                           const KernelOptions& opts = {});

/// Correlations between `s_new` and every source location.
Eigen::VectorXd cross_covariance(const SpatialKernel& kernel, const PitchLocation& s_new);

/// Lower Cholesky factor of `a`; adds `jitter` to the diagonal once on failure.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& a, double jitter, const char* what,
                                     bool* jittered = nullptr);

}  // namespace goalspot
