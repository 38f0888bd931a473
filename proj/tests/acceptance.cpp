// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: goalspot_acceptance [criterion ...]

#include "goalspot/baseline_glm.hpp"
#include "goalspot/exploratory_diag.hpp"
#include "goalspot/gibbs_sampler.hpp"
#include "goalspot/model_selection.hpp"
#include "goalspot/player_metrics.hpp"
#include "goalspot/predictor.hpp"
#include "goalspot/random.hpp"
#include "goalspot/scoring_eval.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace goalspot;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// The sampler's scale is pinned only through the prior: the sigma2 marginal is
// IG(a - p/2, b). This prior centres that marginal at 1 for p = 5.
const PriorConfig kRecoveryPrior{12.5, 9.0};

Eigen::VectorXd truth_theta()
{
    Eigen::VectorXd t(5);
    t << 1.5, -0.6, 0.5, -0.1, 0.2;
    return t;
}

SyntheticSpec field_spec(int n, double phi, std::uint64_t seed)
{
    SyntheticSpec s;
    s.n_shots = n;
    s.theta = truth_theta();
    s.phi = phi;
    s.sigma2 = 1.0;
    s.seed = seed;
    return s;
}

EncodedDesign design_of(const SyntheticData& d, const std::vector<std::string>& columns)
{
    return select_columns(build_design(d.records, SubsetTag::other_shots), columns);
}

EncodedDesign take_rows(const EncodedDesign& d, const std::vector<Eigen::Index>& rows)
{
    EncodedDesign out;
    out.column_names = d.column_names;
    out.subset_tag = d.subset_tag;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), d.cols());
    out.Y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out.X.row(k) = d.X.row(rows[i]);
        out.Y[k] = d.Y[rows[i]];
        out.locations.push_back(d.locations[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

std::vector<double> to_vec(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

// ---------------------------------------------------------------- 1

Outcome truncated_normal()
{
    Rng rng(20240101);
    constexpr int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_truncated_normal(0.0, 1.0, TruncationSide::positive, rng);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double mean_ref = std::sqrt(2.0 / std::numbers::pi);
    const double var_ref = 1.0 - 2.0 / std::numbers::pi;
    bool tail_ok = true;
    for (int i = 0; i < n; ++i) {
        const double x = sample_truncated_normal(-8.0, 1.0, TruncationSide::positive, rng);
        tail_ok = tail_ok && std::isfinite(x) && x > 0.0;
    }
    const bool ok = std::abs(mean - mean_ref) <= 0.01 && std::abs(var - var_ref) <= 0.02 && tail_ok;
    return {ok, fmt("mean %.5f (ref %.5f), var %.5f (ref %.5f), TN(-8) finite&positive=%s", mean,
                    mean_ref, var, var_ref, tail_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------- 2

// P(sign(Z_i) = s_i for all i), Z ~ N(mu, C), by separation of variables on
// the Cholesky factor with tensor Gauss-Legendre on the first two coordinates.
double orthant_probability(const Eigen::Vector3d& mu, const Eigen::Matrix3d& C,
                           const Eigen::Vector3d& s)
{
    const Eigen::Matrix3d D = s.asDiagonal();
    const Eigen::Vector3d m = D * mu;
    const Eigen::Matrix3d L = (D * C * D).llt().matrixL();
    using GL = boost::math::quadrature::gauss<double, 60>;
    // e_k > a_k; q_k = P(E > a_k); e_k = -Phi^{-1}((1 - v) q_k)
    const auto inner = [&](double e1, double v2) {
        const double a2 = -(m[1] + L(1, 0) * e1) / L(1, 1);
        const double q2 = normal_sf(a2);
        const double e2 = -normal_quantile(std::clamp((1.0 - v2) * q2, 1e-300, 1.0));
        const double a3 = -(m[2] + L(2, 0) * e1 + L(2, 1) * e2) / L(2, 2);
        return q2 * normal_sf(a3);
    };
    const double a1 = -m[0] / L(0, 0);
    const double q1 = normal_sf(a1);
    return q1 * GL::integrate(
                    [&](double v1) {
                        const double e1 =
                            -normal_quantile(std::clamp((1.0 - v1) * q1, 1e-300, 1.0));
                        return GL::integrate([&](double v2) { return inner(e1, v2); }, 0.0, 1.0);
                    },
                    0.0, 1.0);
}

Outcome posterior_oracle()
{
    const std::vector<PitchLocation> locs = {{0.0, 10.0}, {4.0, 12.0}, {-3.0, 15.0}};
    const double phi = 0.1;
    const PriorConfig prior{5.0, 4.0};
    EncodedDesign d;
    d.X = Eigen::MatrixXd::Ones(3, 1);
    d.Y = Eigen::Vector3d(1, 0, 1);
    d.locations = locs;
    d.column_names = {"intercept"};
    const auto kernel = build_kernel(locs, phi);

    // With theta = u sigma the likelihood is g(u) = P(sign r = Y | r ~ N(u 1, I + Sigma))
    // and the sigma part integrates in closed form against the IG prior.
    const Eigen::Matrix3d C = Eigen::Matrix3d::Identity() + kernel.sigma_w;
    const Eigen::Vector3d s(1, -1, 1);
    const double u_lo = -14.0, u_hi = 14.0;
    const int n_grid = 2800;
    const double h = (u_hi - u_lo) / n_grid;
    double g0 = 0.0, g1 = 0.0, g2 = 0.0;
    for (int i = 0; i <= n_grid; ++i) {
        const double u = u_lo + i * h;
        const double wt = (i == 0 || i == n_grid) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double g = orthant_probability(Eigen::Vector3d::Constant(u), C, s);
        g0 += wt * g;
        g1 += wt * u * g;
        g2 += wt * u * u * g;
    }
    // E[sigma^m] under IG(a, b) on sigma^2.
    const auto sigma_moment = [&](double m) {
        return std::pow(prior.b, m / 2) *
               std::exp(boost::math::lgamma(prior.a - m / 2) - boost::math::lgamma(prior.a));
    };
    const double mean_ref = g1 / g0 * sigma_moment(2) / sigma_moment(1);
    const double second_ref = g2 / g0 * sigma_moment(3) / sigma_moment(1);
    const double sd_ref = std::sqrt(second_ref - mean_ref * mean_ref);

    ChainConfig chain;
    chain.burn_in = 5000;
    chain.n_samples = 50000;
    chain.seed = 77;
    const auto draws = run_chain(d, kernel, prior, chain);
    const Eigen::VectorXd th = draws.theta.col(0);
    const double mean = th.mean();
    const double sd = std::sqrt((th.array() - mean).square().sum() / (th.size() - 1));

    // Batch means for the Monte-Carlo standard errors.
    const int batches = 50;
    const Eigen::Index len = th.size() / batches;
    std::vector<double> bm(batches), bsd(batches);
    for (int b = 0; b < batches; ++b) {
        const Eigen::VectorXd seg = th.segment(b * len, len);
        bm[static_cast<std::size_t>(b)] = seg.mean();
        bsd[static_cast<std::size_t>(b)] =
            std::sqrt((seg.array() - seg.mean()).square().sum() / (len - 1));
    }
    const auto se_of = [&](const std::vector<double>& v) {
        double m = 0.0, q = 0.0;
        for (double x : v)
            m += x;
        m /= static_cast<double>(v.size());
        for (double x : v)
            q += (x - m) * (x - m);
        return std::sqrt(q / (static_cast<double>(v.size()) - 1) / static_cast<double>(v.size()));
    };
    const double se_mean = se_of(bm), se_sd = se_of(bsd);
    const bool ok = std::abs(mean - mean_ref) <= 3 * se_mean && std::abs(sd - sd_ref) <= 3 * se_sd;
    return {ok, fmt("mean %.4f vs grid %.4f (3se %.4f); sd %.4f vs grid %.4f (3se %.4f)", mean,
                    mean_ref, 3 * se_mean, sd, sd_ref, 3 * se_sd)};
}

// ---------------------------------------------------------------- 3

Outcome parameter_recovery()
{
    int good_reps = 0;
    std::string per;
    for (int rep = 0; rep < 10; ++rep) {
        const auto spec = field_spec(800, 0.1, 3000 + static_cast<std::uint64_t>(rep));
        const auto data = generate(spec);
        const auto d = design_of(data, spec.columns);
        const auto kernel = build_kernel(d.locations, spec.phi);
        ChainConfig chain;
        chain.burn_in = 5000;
        chain.n_samples = 500;
        chain.seed = derive_seed(31, static_cast<std::uint64_t>(rep));
        const auto summary = summarize(run_chain(d, kernel, kRecoveryPrior, chain));
        int within = 0;
        for (int j = 0; j < 5; ++j) {
            const auto& row = summary.rows[static_cast<std::size_t>(j)];
            within += std::abs(row.mean - spec.theta[j]) <= 3 * row.sd;
        }
        good_reps += within >= 4;
        per += std::to_string(within);
    }
    return {good_reps >= 8,
            fmt("%d/10 replicates with >=4/5 coefficients within 3 sd (per replicate: %s)",
                good_reps, per.c_str())};
}

// ---------------------------------------------------------------- 4

Outcome kriging_oracle()
{
    Rng rng(404);
    const std::vector<PitchLocation> locs = {{-5.0, 8.0}, {6.0, 20.0}, {1.0, 33.0}};
    const double phi = 0.15, sigma2 = 1.7;
    const auto kernel = build_kernel(locs, phi);
    Eigen::Vector3d w;
    for (int i = 0; i < 3; ++i)
        w[i] = standard_normal(rng);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const PitchLocation s{-30.0 + 60.0 * uniform01(rng), 55.0 * uniform01(rng)};
        std::vector<PitchLocation> all = {s, locs[0], locs[1], locs[2]};
        Eigen::Matrix4d K;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                K(i, j) = sigma2 * std::exp(-phi * std::hypot(all[static_cast<std::size_t>(i)].x -
                                                                  all[static_cast<std::size_t>(j)].x,
                                                              all[static_cast<std::size_t>(i)].y -
                                                                  all[static_cast<std::size_t>(j)].y));
        const Eigen::Matrix4d P = K.inverse();
        const double mean_ref = -(P.row(0).tail<3>().dot(w)) / P(0, 0);
        const double var_ref = 1.0 / P(0, 0);
        const auto got = kriging_moments(kernel, w, sigma2, s);
        worst = std::max({worst, std::abs(got.mean - mean_ref), std::abs(got.variance - var_ref)});
    }
    return {worst <= 1e-10, fmt("max abs error %.3g over 50 locations", worst)};
}

// ---------------------------------------------------------------- 5

Outcome phi_recovery()
{
    int hits = 0;
    std::string picks;
    for (int rep = 0; rep < 10; ++rep) {
        const auto spec = field_spec(600, 0.2, 5000 + static_cast<std::uint64_t>(rep));
        const auto data = generate(spec);
        const auto d = design_of(data, spec.columns);
        PhiSearchConfig sc;
        sc.seed = derive_seed(55, static_cast<std::uint64_t>(rep));
        const auto chain = search_chain_defaults(sc.seed);
        const auto res = select_phi(d, kRecoveryPrior, chain, sc);
        hits += std::abs(res.phi_star - 0.2) <= 0.05 + 1e-9;
        picks += (picks.empty() ? "" : ",") + fmt("%.2f", res.phi_star);
    }
    return {hits >= 8, fmt("%d/10 within one grid step of 0.2 (picked %s)", hits, picks.c_str())};
}

// ---------------------------------------------------------------- 6

Outcome head_to_head()
{
    int wins = 0;
    std::string per;
    for (int rep = 0; rep < 10; ++rep) {
        const auto spec = field_spec(2000, 0.1, 6000 + static_cast<std::uint64_t>(rep));
        const auto data = generate(spec);
        const auto d = design_of(data, spec.columns);
        const auto [train_rows, test_rows] = split_rows(d.rows(), 0.25, derive_seed(66, rep));
        const auto train = take_rows(d, train_rows);
        const auto test = take_rows(d, test_rows);

        const auto kernel = build_kernel(train.locations, spec.phi);
        ChainConfig chain;
        chain.burn_in = 5000;
        chain.n_samples = 500;
        chain.seed = derive_seed(67, static_cast<std::uint64_t>(rep));
        const auto draws = run_chain(train, kernel, kRecoveryPrior, chain);
        const auto p_spatial = predict_design(draws, kernel, test, derive_seed(68, rep));
        const auto p_glm = to_vec(predict_glm(fit_glm(train), test.X));
        const auto y = to_vec(test.Y);

        const double b_sp = brier(y, p_spatial), b_gl = brier(y, p_glm);
        const double l_sp = log_score(y, p_spatial), l_gl = log_score(y, p_glm);
        const bool win = b_sp <= 0.95 * b_gl && l_sp > l_gl;
        wins += win;
        per += fmt(" [%.3f/%.3f %.1f/%.1f]", b_sp, b_gl, l_sp, l_gl);
    }
    return {wins >= 8, fmt("%d/10 replicates (brier spatial/glm, log spatial/glm):%s", wins,
                           per.c_str())};
}

// ---------------------------------------------------------------- 7

Outcome scoring_identities()
{
    Rng rng(707);
    std::vector<double> y(100), p(100);
    for (std::size_t i = 0; i < 100; ++i) {
        p[i] = 0.001 + 0.998 * uniform01(rng);
        y[i] = uniform01(rng) < 0.4 ? 1.0 : 0.0;
    }
    const double log_gap = std::abs(beta_family_score(y, p, 0.0, 0.0) + log_score(y, p));

    double lo = 1e300, hi = -1e300;
    for (int set = 0; set < 20; ++set) {
        const auto n = 20 + static_cast<std::size_t>(uniform01(rng) * 200);
        std::vector<double> ys(n), ps(n);
        for (std::size_t i = 0; i < n; ++i) {
            ps[i] = uniform01(rng);
            ys[i] = uniform01(rng) < ps[i] ? 1.0 : 0.0;
        }
        const double brier_total = brier(ys, ps) * static_cast<double>(n);
        const double ratio = beta_family_score(ys, ps, 1.0, 1.0) / brier_total;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const double spread = (hi - lo) / (0.5 * (hi + lo));
    return {log_gap <= 1e-6 && spread <= 1e-6,
            fmt("|beta(0,0) + log score| = %.3g; beta(1,1)/brier ratio %.9f, relative spread %.3g",
                log_gap, 0.5 * (hi + lo), spread)};
}

// ---------------------------------------------------------------- 8

Outcome diagnostics_calibration()
{
    const Window window;
    int null_rejects = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto pts = generate_point_pattern(PatternKind::csr, 200, window,
                                                derive_seed(801, static_cast<std::uint64_t>(rep)));
        Rng rng(derive_seed(802, static_cast<std::uint64_t>(rep)));
        std::vector<int> labels(pts.size());
        for (auto& l : labels)
            l = uniform01(rng) < 0.3 ? 1 : 0;
        const auto jc = join_count_test(pts, labels, default_k_neighbors(pts.size()), 999,
                                        derive_seed(803, static_cast<std::uint64_t>(rep)));
        null_rejects += jc.rejects(0.05);
    }

    int clustered_rejects = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto pts = generate_point_pattern(PatternKind::csr, 200, window,
                                                derive_seed(811, static_cast<std::uint64_t>(rep)));
        Rng rng(derive_seed(812, static_cast<std::uint64_t>(rep)));
        // Goals concentrated in three discs, with 10% of labels flipped.
        std::vector<PitchLocation> centres;
        for (int c = 0; c < 3; ++c)
            centres.push_back({-30.0 + 60.0 * uniform01(rng), 5.0 + 50.0 * uniform01(rng)});
        std::vector<int> labels(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bool in = false;
            for (const auto& c : centres)
                in = in || std::hypot(pts[i].x - c.x, pts[i].y - c.y) < 12.0;
            labels[i] = (uniform01(rng) < 0.1) ? !in : in;
        }
        const auto jc = join_count_test(pts, labels, default_k_neighbors(pts.size()), 999,
                                        derive_seed(813, static_cast<std::uint64_t>(rep)));
        clustered_rejects += jc.rejects(0.05);
    }

    const auto csr = generate_point_pattern(PatternKind::csr, 400, window, 821);
    std::vector<double> radii;
    for (int a = 1; a <= 30; ++a)
        radii.push_back(a);
    const auto k = ripley_k(csr, window, radii, 99, 822);
    int inside = 0;
    for (std::size_t i = 0; i < radii.size(); ++i)
        inside += k.k_hat[i] >= k.envelope_low[i] && k.k_hat[i] <= k.envelope_high[i];
    const double frac = static_cast<double>(inside) / static_cast<double>(radii.size());

    const bool ok = null_rejects <= 14 && clustered_rejects >= 45 && frac >= 0.9;
    return {ok, fmt("null rejections %d/200 (%.1f%%), clustered %d/50, CSR K inside envelope "
                    "%d/%zu radii",
                    null_rejects, 100.0 * null_rejects / 200, clustered_rejects, inside,
                    radii.size())};
}

// ---------------------------------------------------------------- 9

Outcome ratings_algebra()
{
    bool ok = true;
    std::string notes;
    {
        // Two games: g1 has SV 0.75 and -0.5, g2 has SV 0.25.
        const std::vector<double> y = {1, 0, 1};
        const std::vector<double> p = {0.25, 0.5, 0.75};
        const std::vector<std::string> m = {"g1", "g1", "g2"};
        const auto r = compute_rating("a", SubsetTag::other_shots, y, p, m);
        ok = ok && r.sp == 0.25 && r.ps == 0.75 && r.n_games == 2;
    }
    {
        const std::vector<double> y = {0, 0, 0, 1};
        const std::vector<double> p = {0.125, 0.375, 0.25, 0.5};
        const std::vector<std::string> m = {"x", "y", "z", "w"};
        const auto r = compute_rating("b", SubsetTag::headers, y, p, m);
        ok = ok && r.sp == -0.25 / 4 && r.ps == 1.25 / 4;
    }
    const auto volume = [](int shots) {
        const auto n = static_cast<std::size_t>(shots);
        return compute_rating("v", SubsetTag::other_shots, std::vector<double>(n, 1.0),
                              std::vector<double>(n, 0.5), std::vector<std::string>(n, "g"));
    };
    const double sp2 = volume(2).sp, sp10 = volume(10).sp;
    ok = ok && sp2 == 1.0 && sp10 == 5.0;
    notes += fmt("volume example SP %.1f vs %.1f", sp2, sp10);

    // SV bounds on fitted ratings.
    SyntheticSpec s = field_spec(150, 0.1, 909);
    s.n_players = 5;
    RatingFitConfig cfg;
    cfg.columns = s.columns;
    cfg.prior = kRecoveryPrior;
    cfg.chain.burn_in = 200;
    cfg.chain.n_samples = 50;
    cfg.chain.seed = 9;
    std::size_t shots = 0;
    bool bounded = true;
    for (const auto& r : rate_all(generate(s).records, SubsetTag::other_shots, cfg)) {
        for (double sv : r.shooting_values) {
            bounded = bounded && sv >= -1.0 && sv <= 1.0;
            ++shots;
        }
    }
    ok = ok && bounded && shots == 150;
    notes += fmt("; SV within [-1,1] for %zu/150 fitted shots: %s", shots, bounded ? "yes" : "no");
    return {ok, "fixtures exact; " + notes};
}

// ---------------------------------------------------------------- 10

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(GOALSPOT_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        std::string body = s.str();
        if (e.path().filename() == "manifest.txt") {
            std::istringstream in(body);
            body.clear();
            for (std::string line; std::getline(in, line);)
                if (line.rfind("timing.", 0) != 0)
                    body += line + '\n';
        }
        files[e.path().filename().string()] = body;
    }
    return files;
}

Outcome determinism()
{
    const fs::path root = fs::path(GOALSPOT_TEST_TMP) / "acceptance";
    fs::remove_all(root);
    const std::string data = (root / "sim" / "synthetic.csv").string();
    const std::string fit_dir = (root / "fit").string();
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"sim", "simulate --n 160 --players 8 --matches 30 --header-share 0.2 --seed 4"},
        {"explore", "explore " + data + " --perms 199 --sims 19 --seed 4"},
        {"fit", "fit " + data + " --burnin 100 --samples 40 --grid-step 5 --seed 4"},
        {"phi", "phi-search " + data + " --grid 0.1:0.5:0.2 --burnin 60 --samples 20 --seed 4"},
        {"eval", "evaluate --fit-dir " + fit_dir + " " + data + " --with-baseline --seed 4"},
        {"rate", "rate " + data + " --burnin 40 --samples 10 --players p0001,p0002 --seed 4"},
    };
    bool ok = true;
    std::string notes;
    for (const auto& [name, args] : commands) {
        const auto dir = root / name;
        const std::string full = args + " --out " + dir.string();
        if (run_cli(full) != 0)
            return {false, "command failed: " + args};
        const auto first = snapshot(dir);
        fs::remove_all(dir);
        if (run_cli(full) != 0)
            return {false, "second run failed: " + args};
        const auto second = snapshot(dir);
        if (first != second) {
            ok = false;
            notes += " " + name + ":differs";
        }
    }
    const auto parsed = parse_shots_file(data);
    const auto rejects = snapshot(root / "explore").at("rejects.csv");
    const bool clean = parsed.rejects.empty() && parsed.records.size() == 160 &&
                       std::count(rejects.begin(), rejects.end(), '\n') == 1;
    ok = ok && clean;
    return {ok, fmt("%zu commands byte-identical across reruns%s; simulate->ingest rejects=%zu",
                    commands.size(), notes.c_str(), parsed.rejects.size())};
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0: no runtime limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all = {
        {1, "truncated-normal sampler", 5, truncated_normal},
        {2, "conditional-posterior oracle", 120, posterior_oracle},
        {3, "parameter recovery", 1800, parameter_recovery},
        {4, "kriging oracle", 1, kriging_oracle},
        {5, "phi recovery", 2700, phi_recovery},
        {6, "spatial vs independent probit", 0, head_to_head},
        {7, "scoring identities", 0, scoring_identities},
        {8, "diagnostics calibration", 0, diagnostics_calibration},
        {9, "ratings algebra", 0, ratings_algebra},
        {10, "determinism and round-trip", 0, determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && secs >= c.budget_seconds) {
            o.pass = false;
            o.detail += fmt("; over time budget %.0fs", c.budget_seconds);
        }
        failures += !o.pass;
        std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << " [" << c.name
                  << "] " << o.detail << fmt(" (%.2fs)", secs) << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
