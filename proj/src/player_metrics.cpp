#include "goalspot/player_metrics.hpp"

#include "goalspot/csv_util.hpp"
#include "goalspot/predictor.hpp"
#include "goalspot/random.hpp"
#include "goalspot/spatial_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <set>
#include <stdexcept>

namespace goalspot {

PlayerRating compute_rating(const std::string& player_id, SubsetTag tag,
                            std::span<const double> y, std::span<const double> p_hat,
                            const std::vector<std::string>& match_ids)
{
    if (y.size() != p_hat.size() || y.size() != match_ids.size())
        throw std::invalid_argument("compute_rating: inputs differ in length");
    if (y.empty())
        throw std::invalid_argument("player " + player_id + " has no qualifying shots");
    PlayerRating r;
    r.player_id = player_id;
    r.subset_tag = tag;
    r.n_shots = static_cast<int>(y.size());
    r.n_games = static_cast<int>(std::set<std::string>(match_ids.begin(), match_ids.end()).size());
    double sv_sum = 0.0, p_sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double sv = y[i] - p_hat[i];
        r.shooting_values.push_back(sv);
        sv_sum += sv;
        p_sum += p_hat[i];
    }
    r.sp = sv_sum / r.n_games;
    r.ps = p_sum / r.n_games;
    return r;
}

std::vector<ShotRecord> leave_player_out(const std::vector<ShotRecord>& all_shots,
                                         const std::string& player_id, SubsetTag tag)
{
    std::vector<ShotRecord> train;
    for (const auto& s : all_shots)
        if (in_subset(s, tag) && s.player_id != player_id)
            train.push_back(s);
    return train;
}

namespace {

PlayerRating rate_one(const std::vector<ShotRecord>& annotated, const std::string& player_id,
                      SubsetTag tag, const RatingFitConfig& cfg, std::uint64_t chain_seed,
                      bool parallel)
{
    std::vector<ShotRecord> own;
    for (const auto& s : annotated)
        if (in_subset(s, tag) && s.player_id == player_id)
            own.push_back(s);
    if (own.empty())
        throw std::invalid_argument("player " + player_id + " has no shots in subset " +
                                    to_string(tag));
    const auto train = leave_player_out(annotated, player_id, tag);
    if (train.empty())
        throw std::invalid_argument("no training shots left after removing player " + player_id);

    auto train_design = build_design(train, tag, cfg.geometry, cfg.opponent);
    auto own_design = build_design(own, tag, cfg.geometry, cfg.opponent);
    if (!cfg.columns.empty()) {
        train_design = select_columns(train_design, cfg.columns);
        own_design = select_columns(own_design, cfg.columns);
    }

    const auto kernel =
        build_kernel(train_design.locations, cfg.phi, {.parallel = parallel, .jitter = 1e-8});
    ChainConfig chain = cfg.chain;
    chain.seed = chain_seed;
    const auto draws = run_chain(train_design, kernel, cfg.prior, chain);
    PredictOptions popts;
    popts.parallel = parallel;
    popts.geometry = cfg.geometry;
    const auto p = predict_design(draws, kernel, own_design, derive_seed(chain_seed, 1), popts);

    std::vector<double> y(own.size());
    std::vector<std::string> matches(own.size());
    for (std::size_t i = 0; i < own.size(); ++i) {
        y[i] = own[i].outcome;
        matches[i] = own[i].match_id;
    }
    return compute_rating(player_id, tag, y, p, matches);
}

std::vector<ShotRecord> annotate(const std::vector<ShotRecord>& all_shots,
                                 const OpponentConfig& cfg)
{
    auto copy = all_shots;
    annotate_opponent_proportions(copy, cfg);
    return copy;
}

}  // namespace

PlayerRating rate_player(const std::vector<ShotRecord>& all_shots, const std::string& player_id,
                         SubsetTag tag, const RatingFitConfig& cfg)
{
    return rate_one(annotate(all_shots, cfg.opponent), player_id, tag, cfg, cfg.chain.seed,
                    true);
}

std::vector<PlayerRating> rate_all(const std::vector<ShotRecord>& all_shots, SubsetTag tag,
                                   const RatingFitConfig& cfg, int workers,
                                   const std::vector<std::string>& only)
{
    const auto annotated = annotate(all_shots, cfg.opponent);
    std::set<std::string> ids;
    for (const auto& s : annotated)
        if (in_subset(s, tag))
            ids.insert(s.player_id);
    const std::vector<std::string> players(ids.begin(), ids.end());
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < players.size(); ++k)
        if (only.empty() || std::find(only.begin(), only.end(), players[k]) != only.end())
            chosen.push_back(k);

    std::vector<PlayerRating> out(chosen.size());
    std::vector<std::exception_ptr> errors(chosen.size());
    workers = std::max(1, workers);
    const bool inner_parallel = workers == 1;
    const auto n = static_cast<long>(chosen.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
    for (long c = 0; c < n; ++c) {
        const auto i = static_cast<std::size_t>(c);
        const auto k = chosen[i];
        try {
            out[i] = rate_one(annotated, players[k], tag, cfg, derive_seed(cfg.chain.seed, k),
                              inner_parallel);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

Measure parse_measure(const std::string& text)
{
    if (text == "sp")
        return Measure::sp;
    if (text == "ps")
        return Measure::ps;
    throw std::invalid_argument("unknown measure: " + text);
}

const char* to_string(Measure m)
{
    return m == Measure::sp ? "sp" : "ps";
}

int default_min_shots(SubsetTag tag)
{
    return tag == SubsetTag::headers ? 10 : 20;
}

std::vector<PlayerRating> rank_players(const std::vector<PlayerRating>& ratings, Measure measure,
                                       int min_shots)
{
    std::vector<PlayerRating> kept;
    for (const auto& r : ratings)
        if (r.n_shots >= min_shots)
            kept.push_back(r);
    const auto key = [&](const PlayerRating& r) {
        return measure == Measure::sp ? std::pair{r.sp, r.ps} : std::pair{r.ps, r.sp};
    };
    std::sort(kept.begin(), kept.end(), [&](const PlayerRating& a, const PlayerRating& b) {
        const auto ka = key(a), kb = key(b);
        if (ka != kb)
            return ka > kb;
        return a.player_id < b.player_id;
    });
    return kept;
}

namespace {

std::vector<HistogramBin> bin_values(const std::vector<double>& v, int n_bins)
{
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
        n_bins = 1;
    }
    const double width = (hi - lo) / n_bins;
    std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        bins[static_cast<std::size_t>(b)].lower = lo + b * width;
        bins[static_cast<std::size_t>(b)].upper = b + 1 == n_bins ? hi : lo + (b + 1) * width;
    }
    for (double x : v) {
        auto b = static_cast<int>(std::floor((x - lo) / width));
        b = std::clamp(b, 0, n_bins - 1);
        ++bins[static_cast<std::size_t>(b)].count;
    }
    return bins;
}

}  // namespace

RatingHistograms rating_histograms(const std::vector<PlayerRating>& ratings, int n_bins)
{
    if (ratings.empty())
        throw std::invalid_argument("rating_histograms needs at least one rating");
    if (n_bins < 1)
        throw std::invalid_argument("n_bins must be positive");
    std::vector<double> sp, ps;
    for (const auto& r : ratings) {
        sp.push_back(r.sp);
        ps.push_back(r.ps);
    }
    return {bin_values(sp, n_bins), bin_values(ps, n_bins)};
}

void write_ratings_csv(std::ostream& out, const std::vector<PlayerRating>& ratings)
{
    out << "player_id,sp,ps,n_shots,n_games\n";
    for (const auto& r : ratings)
        out << r.player_id << ',' << csv::num(r.sp) << ',' << csv::num(r.ps) << ',' << r.n_shots
            << ',' << r.n_games << '\n';
}

void write_rankings_csv(std::ostream& out, const std::vector<PlayerRating>& ranked)
{
    out << "rank,player_id,sp,ps,n_shots,n_games\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& r = ranked[i];
        out << i + 1 << ',' << r.player_id << ',' << csv::num(r.sp) << ',' << csv::num(r.ps)
            << ',' << r.n_shots << ',' << r.n_games << '\n';
    }
}

void write_histograms_csv(std::ostream& out, const RatingHistograms& h)
{
    out << "measure,lower,upper,count\n";
    const auto emit = [&](const char* name, const std::vector<HistogramBin>& bins) {
        for (const auto& b : bins)
            out << name << ',' << csv::num(b.lower) << ',' << csv::num(b.upper) << ',' << b.count
                << '\n';
    };
    emit("sp", h.sp);
    emit("ps", h.ps);
}

}  // namespace goalspot
