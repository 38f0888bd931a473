#pragma once

#include "goalspot/shot_ingest.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace goalspot {

enum class Link { probit, logit };

const char* to_string(Link link);

struct GlmOptions {
    double gradient_tolerance = 1e-8;
    int max_iterations = 100;
};

/// Independent-error binary regression fitted by maximum likelihood.
struct GlmFit {
    std::vector<std::string> column_names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;  // from the inverse observed information
    Link link = Link::probit;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;
    std::vector<double> deviance_trace;
};

/// Fisher scoring with step halving on the deviance.
GlmFit fit_glm(const EncodedDesign& design, Link link = Link::probit, const GlmOptions& opts = {});
GlmFit fit_glm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link = Link::probit,
               const GlmOptions& opts = {});

Eigen::VectorXd predict_glm(const GlmFit& fit, const Eigen::MatrixXd& X_new);

double inverse_link(Link link, double eta);

/// Score vector X' d loglik / d eta at the given coefficients.
Eigen::VectorXd glm_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, Link link);

/// Same layout as the spatial fit summary: estimate, SE and Wald 95% interval.
void write_glm_csv(std::ostream& out, const GlmFit& fit);

}  // namespace goalspot
