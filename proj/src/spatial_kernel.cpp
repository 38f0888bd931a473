#include "goalspot/spatial_kernel.hpp"

#include "goalspot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace goalspot {

namespace {

void check_distinct(const std::vector<PitchLocation>& locs)
{
    std::vector<std::size_t> order(locs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(locs[a].x, locs[a].y, a) < std::tie(locs[b].x, locs[b].y, b);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto i = order[k - 1], j = order[k];
        if (locs[i] == locs[j]) {
            std::ostringstream msg;
            msg << "singular correlation matrix: locations " << i << " and " << j
                << " coincide at (" << locs[i].x << ", " << locs[i].y << ")";
            throw KernelError(msg.str());
        }
    }
}

}  // namespace

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& a, double jitter, const char* what,
                                     bool* jittered)
{
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success)
        return llt.matrixL();
    Eigen::MatrixXd b = a;
    b.diagonal().array() += jitter;
    llt.compute(b);
    if (llt.info() != Eigen::Success)
        throw KernelError(std::string("Cholesky factorization of ") + what +
                          " failed after diagonal jitter");
    if (jittered)
        *jittered = true;
    return llt.matrixL();
}

SpatialKernel build_kernel(const std::vector<PitchLocation>& locations, double phi,
                           const KernelOptions& opts)
{
    if (!(phi > 0.0) || !std::isfinite(phi))
        throw KernelError("phi must be positive");
    if (locations.empty())
        throw KernelError("no locations");
    check_distinct(locations);

    SpatialKernel k;
    k.phi = phi;
    k.locations = locations;
    if (opts.parallel)
        kernels::parallel::exponential_correlation(locations, phi, k.sigma_w);
    else
        kernels::serial::exponential_correlation(locations, phi, k.sigma_w);

    const auto n = k.size();
    k.chol_sigma_w = cholesky_with_jitter(k.sigma_w, opts.jitter, "Sigma_w", &k.jittered);
    const auto tri = k.chol_sigma_w.triangularView<Eigen::Lower>();
    Eigen::MatrixXd linv = tri.solve(Eigen::MatrixXd::Identity(n, n));
    k.sigma_w_inv.noalias() = linv.transpose() * linv;

    // (I + S^{-1})^{-1} = I - (I + S)^{-1}; I + S has eigenvalues >= 1, so
    // this route never inverts the possibly ill-conditioned S directly.
    Eigen::MatrixXd i_plus = k.sigma_w;
    i_plus.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(i_plus);
    if (llt.info() != Eigen::Success)
        throw KernelError("Cholesky factorization of I + Sigma_w failed");
    k.m = -llt.solve(Eigen::MatrixXd::Identity(n, n));
    k.m.diagonal().array() += 1.0;
    k.m = 0.5 * (k.m + k.m.transpose()).eval();
    k.chol_m = cholesky_with_jitter(k.m, opts.jitter, "M", &k.jittered);
    return k;
}

Eigen::VectorXd cross_covariance(const SpatialKernel& kernel, const PitchLocation& s_new)
{
    Eigen::VectorXd c(kernel.size());
    for (Eigen::Index j = 0; j < c.size(); ++j)
        c[j] = std::exp(-kernel.phi *
                        euclidean_distance(kernel.locations[static_cast<std::size_t>(j)], s_new));
    return c;
}

}  // namespace goalspot
