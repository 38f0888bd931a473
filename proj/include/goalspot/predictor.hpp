#pragma once

#include "goalspot/gibbs_sampler.hpp"
#include "goalspot/shot_ingest.hpp"
#include "goalspot/spatial_kernel.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <vector>

namespace goalspot {

struct PredictionRequest {
    PitchLocation location;
    Situation situation;
    SubsetTag subset = SubsetTag::other_shots;
    /// Full design row (in the fitted column order); overrides `situation`.
    std::optional<Eigen::VectorXd> x_row;
};

struct PredictionResult {
    double p_hat = 0.0;
    std::vector<double> p_draws;
    std::vector<int> y_draws;
};

struct PredictOptions {
    bool keep_draws = false;
    bool sample_outcome = false;
    bool parallel = true;
    GeometryConfig geometry;
};

/// Simple-kriging weights Sigma_w^{-1} c and the unit-scale conditional
/// variance 1 - c' Sigma_w^{-1} c for a new location.
struct KrigingWeights {
    Eigen::VectorXd weights;
    double unit_variance = 0.0;
};

KrigingWeights kriging_weights(const SpatialKernel& kernel, const PitchLocation& s_new);

struct KrigingMoments {
    double mean = 0.0;
    double variance = 0.0;
};

KrigingMoments kriging_moments(const SpatialKernel& kernel, const Eigen::VectorXd& w,
                               double sigma2, const PitchLocation& s_new);

/// One draw of w(s_new) given a posterior draw of (w, sigma2).
double krige_w(const SpatialKernel& kernel, const Eigen::VectorXd& w_draw, double sigma2_draw,
               const PitchLocation& s_new, Rng& rng);

/// Posterior-mean conversion probability at one location: for every retained
/// draw, krige w(s'), then average Phi((x' theta + w(s')) / sigma).
PredictionResult predict_probability(const PosteriorDraws& draws, const SpatialKernel& kernel,
                                     const PredictionRequest& req, Rng& rng,
                                     const PredictOptions& opts = {});

/// Many locations. Request g draws its randomness from make_rng(seed, g), so
/// results do not depend on `opts.parallel` or the thread count.
std::vector<PredictionResult> predict_batch(const PosteriorDraws& draws,
                                            const SpatialKernel& kernel,
                                            const std::vector<PredictionRequest>& requests,
                                            std::uint64_t seed, const PredictOptions& opts = {});

/// Convenience: probabilities for the rows of an encoded design.
std::vector<double> predict_design(const PosteriorDraws& draws, const SpatialKernel& kernel,
                                   const EncodedDesign& design, std::uint64_t seed,
                                   const PredictOptions& opts = {});

struct GridSpec {
    double x_min = -35.0, x_max = 35.0;
    double y_min = 0.0, y_max = 60.0;
    double step = 1.0;
};

struct HeatmapGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    Eigen::MatrixXd p_hat;  // ys.size() x xs.size()
};

/// Throws when the grid reaches beyond the half line. Nodes at the goal
/// center are nudged off the origin, where distance and angle are undefined.
HeatmapGrid heatmap_grid(const PosteriorDraws& draws, const SpatialKernel& kernel,
                         const GridSpec& grid, const Situation& baseline, SubsetTag subset,
                         std::uint64_t seed, const PredictOptions& opts = {});

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid);
/// Plain PGM (P2), 0 = p of 0 and 255 = p of 1, top row at the largest y.
void write_heatmap_pgm(std::ostream& out, const HeatmapGrid& grid);

}  // namespace goalspot
