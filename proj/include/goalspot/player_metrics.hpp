#pragma once

#include "goalspot/gibbs_sampler.hpp"
#include "goalspot/shot_ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace goalspot {

struct PlayerRating {
    std::string player_id;
    SubsetTag subset_tag = SubsetTag::other_shots;
    double sp = 0.0;
    double ps = 0.0;
    int n_shots = 0;
    int n_games = 0;
    std::vector<double> shooting_values;  // Y_i - p_i per shot
};

/// Settings for the leave-player-out spatial fit.
struct RatingFitConfig {
    double phi = 0.1;
    PriorConfig prior;
    ChainConfig chain;
    std::vector<std::string> columns;  // empty keeps every design column
    GeometryConfig geometry;
    OpponentConfig opponent;
};

/// SP = sum(Y - p) / g and PS = sum(p) / g, with g the number of distinct
/// match ids. Inputs are aligned per shot.
PlayerRating compute_rating(const std::string& player_id, SubsetTag tag,
                            std::span<const double> y, std::span<const double> p_hat,
                            const std::vector<std::string>& match_ids);

/// Fits the spatial model on every other player's shots in `tag` and rates
/// `player_id` on their own shots. Locations must already be distinct.
PlayerRating rate_player(const std::vector<ShotRecord>& all_shots, const std::string& player_id,
                         SubsetTag tag, const RatingFitConfig& cfg);

/// Training rows used for `player_id`: every shot in `tag` taken by someone else.
std::vector<ShotRecord> leave_player_out(const std::vector<ShotRecord>& all_shots,
                                         const std::string& player_id, SubsetTag tag);

/// Rates every player with a shot in `tag` (or only those listed in `only`),
/// ordered by player_id. Player k in that full order uses chain seed
/// derive_seed(cfg.chain.seed, k), so the output does not depend on `workers`
/// or on the filter.
std::vector<PlayerRating> rate_all(const std::vector<ShotRecord>& all_shots, SubsetTag tag,
                                   const RatingFitConfig& cfg, int workers = 1,
                                   const std::vector<std::string>& only = {});

enum class Measure { sp, ps };

Measure parse_measure(const std::string& text);
const char* to_string(Measure m);

/// 10 for headers, 20 for other shots.
int default_min_shots(SubsetTag tag);

/// Keeps ratings with n_shots >= min_shots, sorted descending by `measure`;
/// ties go to the other measure, then to player_id.
std::vector<PlayerRating> rank_players(const std::vector<PlayerRating>& ratings, Measure measure,
                                       int min_shots);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    int count = 0;
};

struct RatingHistograms {
    std::vector<HistogramBin> sp;
    std::vector<HistogramBin> ps;
};

/// Equal-width bins over each measure's observed range; a degenerate range
/// gets one bin of unit width centered on the value.
RatingHistograms rating_histograms(const std::vector<PlayerRating>& ratings, int n_bins = 20);

void write_ratings_csv(std::ostream& out, const std::vector<PlayerRating>& ratings);
void write_rankings_csv(std::ostream& out, const std::vector<PlayerRating>& ranked);
void write_histograms_csv(std::ostream& out, const RatingHistograms& h);

}  // namespace goalspot
