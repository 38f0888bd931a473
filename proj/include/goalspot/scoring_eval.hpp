#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace goalspot {

inline constexpr double kProbabilityClip = 1e-12;

enum class Aggregate { mean, total };

double brier(std::span<const double> y, std::span<const double> p);

/// Sum (or mean) of y log p + (1 - y) log(1 - p), with p clipped to
/// [1e-12, 1 - 1e-12]. Higher is better; never positive.
double log_score(std::span<const double> y, std::span<const double> p,
                 Aggregate aggregate = Aggregate::total);

double classification_error(std::span<const double> y, std::span<const double> p,
                            double threshold = 0.5);

/// Per-observation loss of the beta family with weight t^(a-1) (1-t)^(b-1):
///   y = 1:  integral_f^1 t^(a-1) (1-t)^b dt
///   y = 0:  integral_0^f t^a (1-t)^(b-1) dt
/// a = b = 0 is the log loss, a = b = 1 half the squared error.
double beta_family_loss(int y, double f, double alpha, double beta);

/// Total loss over the sample (lower is better).
double beta_family_score(std::span<const double> y, std::span<const double> p, double alpha,
                         double beta);

struct ScoreReport {
    double brier = 0.0;
    double log_score_total = 0.0;
    double log_score_mean = 0.0;
    double error_rate = 0.0;
    std::size_t n = 0;
};

ScoreReport score_report(std::span<const double> y, std::span<const double> p);

struct BetaScoreCurve {
    std::vector<double> cost_grid;  // alpha / (alpha + beta)
    std::vector<double> scores;     // negated total loss, higher is better
    double scale = 2.0;             // alpha + beta
};

std::vector<double> default_cost_grid();  // 0.05, 0.10, ..., 0.95

BetaScoreCurve beta_score_curve(std::span<const double> y, std::span<const double> p,
                                const std::vector<double>& cost_grid, double scale = 2.0);

struct ModelPredictions {
    std::string model;
    std::string subset;
    std::vector<double> y;
    std::vector<double> p;
};

struct ComparisonTable {
    std::vector<std::string> models;
    struct Row {
        std::string subset;
        std::string metric;
        std::vector<double> values;  // one per model
    };
    std::vector<Row> rows;
};

/// Rows = subset x {brier, log_score_total, log_score_mean, error_rate},
/// columns = models. All models for a subset must share the same outcomes.
ComparisonTable compare_models(const std::vector<ModelPredictions>& inputs);

void write_scores_csv(std::ostream& out, const ComparisonTable& table);
void write_beta_curves_csv(std::ostream& out, const std::vector<std::string>& models,
                           const std::vector<BetaScoreCurve>& curves);

}  // namespace goalspot
