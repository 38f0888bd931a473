#include "goalspot/baseline_glm.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/random.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace goalspot {

namespace {

constexpr double kDivergentCoefficient = 1e3;
constexpr double kNumericallyZero = 1e-10;

// phi(eta) / Phi(eta), stable in the lower tail.
double probit_ratio(double eta)
{
    if (eta < -30.0) {
        const double x = -eta;
        return x * x * x / (x * x - 1.0);
    }
    return normal_pdf(eta) / normal_cdf(eta);
}

struct LinkTerms {
    double dl;    // d loglik / d eta
    double d2l;   // d^2 loglik / d eta^2
    double info;  // Fisher weight f^2 / (F (1 - F))
    double loglik;
};

LinkTerms link_terms(Link link, double eta, double y)
{
    LinkTerms t{};
    if (link == Link::logit) {
        const double F = 1.0 / (1.0 + std::exp(-eta));
        t.dl = y - F;
        t.d2l = -F * (1.0 - F);
        t.info = F * (1.0 - F);
        // log F = -log1p(exp(-eta)), log(1 - F) = -log1p(exp(eta))
        const auto softplus = [](double z) {
            return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        };
        t.loglik = -(y * softplus(-eta) + (1.0 - y) * softplus(eta));
        return t;
    }
    // probit: a = phi/Phi at eta, b = phi/(1-Phi) = ratio at -eta
    const double a = probit_ratio(eta);
    const double b = probit_ratio(-eta);
    t.dl = y * a - (1.0 - y) * b;
    // d/deta (phi/Phi) = -a (eta + a); d/deta (-phi/(1-Phi)) = -b (b - eta)
    t.d2l = y * (-a * (eta + a)) + (1.0 - y) * (-b * (b - eta));
    t.info = a * b;
    const double log_pdf = -0.5 * eta * eta - 0.9189385332046727;
    const double logF = eta < -30.0 ? log_pdf - std::log(a) : std::log(normal_cdf(eta));
    const double log1mF = eta > 30.0 ? log_pdf - std::log(b) : std::log(normal_sf(eta));
    t.loglik = y * logF + (1.0 - y) * log1mF;
    return t;
}

double total_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                    Link link)
{
    const Eigen::VectorXd eta = X * beta;
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        s += link_terms(link, eta[i], y[i]).loglik;
    return s;
}

}  // namespace

const char* to_string(Link link)
{
    return link == Link::probit ? "probit" : "logit";
}

double inverse_link(Link link, double eta)
{
    return link == Link::probit ? normal_cdf(eta) : 1.0 / (1.0 + std::exp(-eta));
}

Eigen::VectorXd glm_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& beta, Link link)
{
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd d(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        d[i] = link_terms(link, eta[i], y[i]).dl;
    return X.transpose() * d;
}

GlmFit fit_glm(const EncodedDesign& design, Link link, const GlmOptions& opts)
{
    GlmFit fit = fit_glm(design.X, design.Y, link, opts);
    fit.column_names = design.column_names;
    return fit;
}

GlmFit fit_glm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link,
               const GlmOptions& opts)
{
    if (X.rows() != y.size())
        throw std::invalid_argument("fit_glm: X and y sizes differ");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols())
        throw std::invalid_argument("fit_glm: rank-deficient design");

    const auto n = X.rows();
    const auto p = X.cols();
    GlmFit fit;
    fit.link = link;
    fit.coefficients = Eigen::VectorXd::Zero(p);
    double ll = total_loglik(X, y, fit.coefficients, link);
    fit.deviance_trace.push_back(-2.0 * ll);

    Eigen::VectorXd grad(p);
    Eigen::VectorXd weights(n), dl(n);
    for (int it = 0; it < opts.max_iterations; ++it) {
        const Eigen::VectorXd eta = X * fit.coefficients;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto t = link_terms(link, eta[i], y[i]);
            dl[i] = t.dl;
            weights[i] = std::max(t.info, 1e-300);
        }
        grad = X.transpose() * dl;
        fit.gradient_norm = grad.norm();
        if (fit.gradient_norm < opts.gradient_tolerance) {
            fit.converged = true;
            break;
        }
        const Eigen::MatrixXd info = X.transpose() * weights.asDiagonal() * X;
        const Eigen::VectorXd step = info.ldlt().solve(grad);

        // Step halving keeps the deviance nonincreasing.
        double scale = 1.0;
        Eigen::VectorXd candidate = fit.coefficients + step;
        double cand_ll = total_loglik(X, y, candidate, link);
        int halvings = 0;
        while (!(cand_ll >= ll) && halvings < 30) {
            scale *= 0.5;
            candidate = fit.coefficients + scale * step;
            cand_ll = total_loglik(X, y, candidate, link);
            ++halvings;
        }
        fit.iterations = it + 1;
        if (!(cand_ll >= ll))
            break;  // no ascent direction left at machine precision
        fit.coefficients = candidate;
        ll = cand_ll;
        fit.deviance_trace.push_back(-2.0 * ll);
    }
    if (!fit.converged) {
        grad = glm_score(X, y, fit.coefficients, link);
        fit.gradient_norm = grad.norm();
        fit.converged = fit.gradient_norm < opts.gradient_tolerance;
    }
    fit.log_likelihood = ll;
    fit.separation = fit.coefficients.cwiseAbs().maxCoeff() > kDivergentCoefficient ||
                     (!fit.converged && fit.iterations >= opts.max_iterations);
    // Fitted probabilities numerically 0 or 1.
    const Eigen::VectorXd eta_hat = X * fit.coefficients;
    for (Eigen::Index i = 0; i < n && !fit.separation; ++i) {
        const double f = inverse_link(link, eta_hat[i]);
        fit.separation = f < kNumericallyZero || f > 1.0 - kNumericallyZero;
    }

    // Observed information at the optimum.
    const Eigen::VectorXd eta = X * fit.coefficients;
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i)
        h[i] = -link_terms(link, eta[i], y[i]).d2l;
    const Eigen::MatrixXd observed = X.transpose() * h.asDiagonal() * X;
    const Eigen::MatrixXd cov = observed.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return fit;
}

Eigen::VectorXd predict_glm(const GlmFit& fit, const Eigen::MatrixXd& X_new)
{
    if (X_new.cols() != fit.coefficients.size())
        throw std::invalid_argument("predict_glm: column mismatch");
    const Eigen::VectorXd eta = X_new * fit.coefficients;
    return eta.unaryExpr([&](double e) { return inverse_link(fit.link, e); });
}

void write_glm_csv(std::ostream& out, const GlmFit& fit)
{
    out << "parameter,estimate,standard_error,ci_lower,ci_upper\n";
    for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j) {
        const auto name = static_cast<std::size_t>(j) < fit.column_names.size()
                              ? fit.column_names[static_cast<std::size_t>(j)]
                              : "beta" + std::to_string(j);
        const double est = fit.coefficients[j], se = fit.standard_errors[j];
        out << name << ',' << csv::num(est) << ',' << csv::num(se) << ','
            << csv::num(est - 1.959963984540054 * se) << ','
            << csv::num(est + 1.959963984540054 * se) << '\n';
    }
}

}  // namespace goalspot
