#include "goalspot/synthetic_gen.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/random.hpp"
#include "goalspot/spatial_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace goalspot {

namespace {

enum Stream : std::uint64_t { kLocations = 0, kSituation = 1, kField = 2, kNoise = 3 };

PitchLocation uniform_point(const Window& w, Rng& rng)
{
    return {w.x_min + (w.x_max - w.x_min) * uniform01(rng),
            w.y_min + (w.y_max - w.y_min) * uniform01(rng)};
}

bool usable(const PitchLocation& p)
{
    return !(p.x == 0.0 && p.y == 0.0);
}

std::string padded(const char* prefix, long value, int width)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*ld", prefix, width, value);
    return buf;
}

}  // namespace

LocationProcess parse_location_process(const std::string& text)
{
    if (text == "uniform_half" || text == "uniform")
        return LocationProcess::uniform_half;
    if (text == "clustered")
        return LocationProcess::clustered;
    if (text == "grid")
        return LocationProcess::grid;
    throw std::invalid_argument("unknown location process: " + text);
}

const char* to_string(LocationProcess p)
{
    switch (p) {
    case LocationProcess::uniform_half: return "uniform_half";
    case LocationProcess::clustered: return "clustered";
    case LocationProcess::grid: return "grid";
    }
    return "?";
}

void SyntheticSpec::validate() const
{
    if (n_shots < 1)
        throw std::invalid_argument("n_shots must be at least 1");
    if (!(phi > 0.0))
        throw std::invalid_argument("phi must be positive");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("sigma2 must be positive");
    if (static_cast<std::size_t>(theta.size()) != columns.size())
        throw std::invalid_argument("theta and columns differ in length");
    if (!(header_share >= 0.0 && header_share <= 1.0))
        throw std::invalid_argument("header_share must lie in [0, 1]");
    if (!(home_rate >= 0.0 && home_rate <= 1.0))
        throw std::invalid_argument("home_rate must lie in [0, 1]");
    if (n_players < 1 || n_matches < 1 || n_teams < 1)
        throw std::invalid_argument("player, match and team counts must be positive");
    if (!(window.area() > 0.0) || window.y_min < 0.0 || window.y_max > geometry.half_line())
        throw std::invalid_argument("window must lie inside the attacking half");
    const auto headers = design_columns(SubsetTag::headers);
    const auto others = design_columns(SubsetTag::other_shots);
    for (const auto& c : columns) {
        if (c == "opponent")
            throw std::invalid_argument("opponent cannot carry a synthetic coefficient");
        const bool in_h = std::find(headers.begin(), headers.end(), c) != headers.end();
        const bool in_o = std::find(others.begin(), others.end(), c) != others.end();
        if (!in_o || (header_share > 0.0 && !in_h))
            throw std::invalid_argument("unknown synthetic column: " + c);
    }
}

std::vector<PitchLocation> generate_point_pattern(PatternKind kind, int n, const Window& window,
                                                  std::uint64_t seed,
                                                  const ClusterConfig& cluster)
{
    if (n < 1)
        throw std::invalid_argument("point pattern needs n >= 1");
    Rng rng = make_rng(seed, kLocations);
    std::vector<PitchLocation> parents;
    if (kind == PatternKind::clustered) {
        const auto n_parents = std::max<long>(
            1, std::lround(static_cast<double>(n) * cluster.parents_per_100 / 100.0));
        for (long k = 0; k < n_parents; ++k)
            parents.push_back(uniform_point(window, rng));
    }
    const auto draw = [&]() -> PitchLocation {
        if (kind == PatternKind::csr)
            return uniform_point(window, rng);
        const auto& c = parents[std::uniform_int_distribution<std::size_t>(
            0, parents.size() - 1)(rng)];
        for (;;) {
            PitchLocation p{c.x + cluster.dispersion * standard_normal(rng),
                            c.y + cluster.dispersion * standard_normal(rng)};
            if (window.contains(p))
                return p;
        }
    };

    std::vector<PitchLocation> pts;
    pts.reserve(static_cast<std::size_t>(n));
    std::set<std::pair<double, double>> seen;
    while (pts.size() < static_cast<std::size_t>(n)) {
        const auto p = draw();
        if (usable(p) && seen.emplace(p.x, p.y).second)
            pts.push_back(p);
    }
    return pts;
}

namespace {

std::vector<PitchLocation> grid_pattern(int n, const Window& w)
{
    const double width = w.x_max - w.x_min, height = w.y_max - w.y_min;
    const int nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(n * width / height))));
    const int ny = (n + nx - 1) / nx;
    std::vector<PitchLocation> pts;
    for (int j = 0; j < ny && static_cast<int>(pts.size()) < n; ++j)
        for (int i = 0; i < nx && static_cast<int>(pts.size()) < n; ++i)
            pts.push_back({w.x_min + (i + 0.5) * width / nx, w.y_min + (j + 0.5) * height / ny});
    return pts;
}

}  // namespace

SyntheticData generate(const SyntheticSpec& spec)
{
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_shots);

    std::vector<PitchLocation> locs;
    switch (spec.location_process) {
    case LocationProcess::uniform_half:
        locs = generate_point_pattern(PatternKind::csr, spec.n_shots, spec.window, spec.seed);
        break;
    case LocationProcess::clustered:
        locs = generate_point_pattern(PatternKind::clustered, spec.n_shots, spec.window,
                                      spec.seed, spec.cluster);
        break;
    case LocationProcess::grid:
        locs = grid_pattern(spec.n_shots, spec.window);
        break;
    }

    SyntheticData data;
    data.records.resize(n);
    Rng srng = make_rng(spec.seed, kSituation);
    const auto pick = [&](int count) {
        return std::uniform_int_distribution<int>(0, count - 1)(srng);
    };
    for (std::size_t i = 0; i < n; ++i) {
        auto& rec = data.records[i];
        rec.shot_id = padded("s", static_cast<long>(i + 1), 6);
        const int match = pick(spec.n_matches);
        rec.match_id = padded("m", match + 1, 4);
        rec.player_id = padded("p", pick(spec.n_players) + 1, 4);
        rec.opponent_id = padded("t", pick(spec.n_teams) + 1, 2);
        rec.location = locs[i];
        if (uniform01(srng) < spec.header_share)
            rec.body_part = BodyPart::header;
        else
            rec.body_part = std::array{BodyPart::left_foot, BodyPart::right_foot,
                                       BodyPart::other}[static_cast<std::size_t>(pick(3))];
        rec.is_home = uniform01(srng) < spec.home_rate;
        rec.is_first_half = uniform01(srng) < 0.5;
        rec.is_stoppage = uniform01(srng) < 0.5;
        rec.minute = (rec.is_first_half ? 1 : 46) + pick(45);
        rec.goal_diff = pick(3) - 1;
        rec.keeper_reach = keeper_reach_default(rec.location, spec.geometry);
        rec.timestamp_order = static_cast<std::int64_t>(i);
    }

    auto& truth = data.truth;
    truth.columns = spec.columns;
    truth.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.columns.size()));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rec = data.records[i];
        const auto tag = rec.is_header() ? SubsetTag::headers : SubsetTag::other_shots;
        const auto full = design_row(rec.location, situation_of(rec), tag, spec.geometry);
        truth.X.row(static_cast<Eigen::Index>(i)) =
            project_row(full, tag, spec.columns).transpose();
    }

    const auto kernel = build_kernel(locs, spec.phi, {.parallel = true, .jitter = 1e-8});
    Rng frng = make_rng(spec.seed, kField);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z[i] = standard_normal(frng);
    const double sigma = std::sqrt(spec.sigma2);
    truth.w = sigma * (kernel.chol_sigma_w * z);

    Rng erng = make_rng(spec.seed, kNoise);
    const Eigen::VectorXd mean = truth.X * spec.theta + truth.w;
    truth.r.resize(mean.size());
    truth.p_true.resize(mean.size());
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
        truth.r[i] = mean[i] + sigma * standard_normal(erng);
        truth.p_true[i] = normal_cdf(mean[i] / sigma);
        data.records[static_cast<std::size_t>(i)].outcome = truth.r[i] > 0.0 ? 1 : 0;
    }
    return data;
}

void write_truth_csv(std::ostream& out, const SyntheticData& data)
{
    out << "shot_id,w,r,p_true\n";
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out << data.records[i].shot_id << ',' << csv::num(data.truth.w[k]) << ','
            << csv::num(data.truth.r[k]) << ',' << csv::num(data.truth.p_true[k]) << '\n';
    }
}

}  // namespace goalspot
