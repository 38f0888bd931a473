#include "goalspot/scoring_eval.hpp"

#include "goalspot/csv_util.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace goalspot {

namespace {

void check_aligned(std::span<const double> y, std::span<const double> p, const char* what)
{
    if (y.size() != p.size())
        throw std::invalid_argument(std::string(what) + ": length mismatch");
}

double clip(double p)
{
    return std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip);
}

double integrate(const auto& f, double lo, double hi)
{
    if (hi <= lo)
        return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15u, 1e-13);
}

}  // namespace

double brier(std::span<const double> y, std::span<const double> p)
{
    check_aligned(y, p, "brier");
    if (y.empty())
        return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += (p[i] - y[i]) * (p[i] - y[i]);
    return s / static_cast<double>(y.size());
}

double log_score(std::span<const double> y, std::span<const double> p, Aggregate aggregate)
{
    check_aligned(y, p, "log_score");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double f = clip(p[i]);
        s += y[i] * std::log(f) + (1.0 - y[i]) * std::log1p(-f);
    }
    if (aggregate == Aggregate::mean && !y.empty())
        s /= static_cast<double>(y.size());
    return s;
}

double classification_error(std::span<const double> y, std::span<const double> p,
                            double threshold)
{
    check_aligned(y, p, "classification_error");
    if (y.empty())
        return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int predicted = p[i] >= threshold ? 1 : 0;
        if (predicted != static_cast<int>(std::lround(y[i])))
            ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(y.size());
}

double beta_family_loss(int y, double f, double a, double b)
{
    if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("beta family parameters must be nonnegative");
    f = clip(f);
    if (y == 1) {
        if (a > 0.0)
            return boost::math::betac(a, b + 1.0, f);
        // integral_f^1 (1-t)^b / t dt = -log f - integral_f^1 (1 - (1-t)^b) / t dt
        const double rest =
            b == 0.0 ? 0.0
                     : integrate([&](double t) { return (1.0 - std::pow(1.0 - t, b)) / t; }, f,
                                 1.0);
        return -std::log(f) - rest;
    }
    if (b > 0.0)
        return boost::math::beta(a + 1.0, b, f);
    // integral_0^f t^a / (1-t) dt = -log(1-f) - integral_0^f (1 - t^a) / (1-t) dt
    const double rest =
        a == 0.0 ? 0.0
                 : integrate([&](double t) { return (1.0 - std::pow(t, a)) / (1.0 - t); }, 0.0,
                             f);
    return -std::log1p(-f) - rest;
}

double beta_family_score(std::span<const double> y, std::span<const double> p, double alpha,
                         double beta)
{
    check_aligned(y, p, "beta_family_score");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += beta_family_loss(y[i] > 0.5 ? 1 : 0, p[i], alpha, beta);
    return s;
}

ScoreReport score_report(std::span<const double> y, std::span<const double> p)
{
    ScoreReport r;
    r.n = y.size();
    r.brier = brier(y, p);
    r.log_score_total = log_score(y, p, Aggregate::total);
    r.log_score_mean = log_score(y, p, Aggregate::mean);
    r.error_rate = classification_error(y, p);
    return r;
}

std::vector<double> default_cost_grid()
{
    std::vector<double> g;
    for (int k = 1; k <= 19; ++k)
        g.push_back(0.05 * k);
    return g;
}

BetaScoreCurve beta_score_curve(std::span<const double> y, std::span<const double> p,
                                const std::vector<double>& cost_grid, double scale)
{
    BetaScoreCurve curve;
    curve.scale = scale;
    for (double c : cost_grid) {
        if (!(c > 0.0 && c < 1.0))
            throw std::invalid_argument("cost values must lie strictly inside (0, 1)");
        curve.cost_grid.push_back(c);
        curve.scores.push_back(-beta_family_score(y, p, scale * c, scale * (1.0 - c)));
    }
    return curve;
}

ComparisonTable compare_models(const std::vector<ModelPredictions>& inputs)
{
    ComparisonTable t;
    std::vector<std::string> subsets;
    for (const auto& in : inputs) {
        check_aligned(in.y, in.p, "compare_models");
        if (std::find(t.models.begin(), t.models.end(), in.model) == t.models.end())
            t.models.push_back(in.model);
        if (std::find(subsets.begin(), subsets.end(), in.subset) == subsets.end())
            subsets.push_back(in.subset);
    }

    for (const auto& subset : subsets) {
        const std::vector<double>* reference = nullptr;
        std::vector<ScoreReport> reports(t.models.size());
        std::vector<char> present(t.models.size(), 0);
        for (const auto& in : inputs) {
            if (in.subset != subset)
                continue;
            if (reference && *reference != in.y)
                throw std::invalid_argument("misaligned evaluation sets for subset " + subset);
            reference = &in.y;
            const auto m = static_cast<std::size_t>(
                std::find(t.models.begin(), t.models.end(), in.model) - t.models.begin());
            reports[m] = score_report(in.y, in.p);
            present[m] = 1;
        }
        const auto add = [&](const char* metric, auto field) {
            ComparisonTable::Row row{subset, metric, {}};
            for (std::size_t m = 0; m < reports.size(); ++m)
                row.values.push_back(present[m] ? field(reports[m]) : std::nan(""));
            t.rows.push_back(std::move(row));
        };
        add("brier", [](const ScoreReport& r) { return r.brier; });
        add("log_score_total", [](const ScoreReport& r) { return r.log_score_total; });
        add("log_score_mean", [](const ScoreReport& r) { return r.log_score_mean; });
        add("error_rate", [](const ScoreReport& r) { return r.error_rate; });
        add("n", [](const ScoreReport& r) { return static_cast<double>(r.n); });
    }
    return t;
}

void write_scores_csv(std::ostream& out, const ComparisonTable& table)
{
    out << "subset,metric";
    for (const auto& m : table.models)
        out << ',' << m;
    out << '\n';
    for (const auto& row : table.rows) {
        out << row.subset << ',' << row.metric;
        for (double v : row.values)
            out << ',' << csv::num(v);
        out << '\n';
    }
}

void write_beta_curves_csv(std::ostream& out, const std::vector<std::string>& models,
                           const std::vector<BetaScoreCurve>& curves)
{
    if (models.size() != curves.size())
        throw std::invalid_argument("one curve per model required");
    out << "cost";
    for (const auto& m : models)
        out << ',' << m;
    out << '\n';
    if (curves.empty())
        return;
    for (std::size_t k = 0; k < curves.front().cost_grid.size(); ++k) {
        out << csv::num(curves.front().cost_grid[k]);
        for (const auto& c : curves)
            out << ',' << csv::num(c.scores.at(k));
        out << '\n';
    }
}

}  // namespace goalspot
