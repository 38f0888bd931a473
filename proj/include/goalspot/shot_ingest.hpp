#pragma once

#include "goalspot/pitch_geometry.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace goalspot {

enum class BodyPart { header, left_foot, right_foot, other };
enum class GoalDiffState { trailing, level, leading };
enum class SubsetTag { headers, other_shots };

const char* to_string(SubsetTag tag);
SubsetTag parse_subset(const std::string& text);  // "headers" | "others" | "other_shots"
char body_part_code(BodyPart bp);

/// Situational covariates of a shot, i.e. everything except its location.
struct Situation {
    BodyPart body_part = BodyPart::right_foot;
    bool is_home = false;
    bool is_first_half = false;
    bool is_stoppage = false;
    GoalDiffState goal_diff = GoalDiffState::level;
    std::optional<double> keeper_reach;
    double opponent_proportion = 0.0;
};

struct ShotRecord {
    std::string shot_id;
    std::string match_id;
    std::string player_id;
    std::string opponent_id;
    PitchLocation location;
    int outcome = 0;
    BodyPart body_part = BodyPart::other;
    bool is_home = false;
    bool is_first_half = false;
    bool is_stoppage = false;
    int minute = 0;
    int goal_diff = 0;
    std::optional<double> keeper_reach;
    bool is_penalty = false;
    bool is_own_goal = false;
    std::int64_t timestamp_order = 0;
    /// Mandatory covariates that were blank in the source row.
    std::vector<std::string> missing;
    /// Filled by annotate_opponent_proportions; computed on demand otherwise.
    std::optional<double> opponent_proportion;

    GoalDiffState goal_diff_state() const;
    bool is_header() const { return body_part == BodyPart::header; }
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<ShotRecord> records;
    std::vector<RejectedRow> rejects;
    bool has_keeper_reach_column = false;
};

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kShotCsvHeader =
    "shot_id,match_id,player_id,opponent_id,x,y,outcome,body_part,is_home,half,minute,"
    "is_stoppage,goal_diff,keeper_reach,is_penalty,is_own_goal";

/// Parses the shot CSV. A missing mandatory column is an IngestError; a
/// malformed row is recorded in `rejects` with its 1-based line number.
/// `timestamp_order` is the row's position in the file.
ParseResult parse_shots(std::istream& in);
ParseResult parse_shots_file(const std::string& path);

void write_shots_csv(std::ostream& out, const std::vector<ShotRecord>& records);
void write_rejects_csv(std::ostream& out, const std::vector<RejectedRow>& rejects);

struct DroppedShot {
    ShotRecord record;
    std::string reason;
};

struct ExclusionResult {
    std::vector<ShotRecord> kept;
    std::vector<DroppedShot> dropped;
};

ExclusionResult apply_exclusions(const std::vector<ShotRecord>& records,
                                 const GeometryConfig& geometry = {});

enum class ColdStart { zero, league_mean };

struct OpponentConfig {
    ColdStart cold_start = ColdStart::zero;
    double default_value = 0.0;
};

/// Share of goals among shots against `opponent_id` with timestamp_order
/// strictly before `as_of`.
double opponent_proportion(const std::vector<ShotRecord>& records, std::int64_t as_of,
                           const std::string& opponent_id, const OpponentConfig& cfg = {});

/// Sets `opponent_proportion` on every record from its own strict prefix.
void annotate_opponent_proportions(std::vector<ShotRecord>& records,
                                   const OpponentConfig& cfg = {});

enum class DuplicateMode { seeded_random, refit };

/// Predicts outcome probabilities for `test` from a model trained on `train`.
using FitContext = std::function<std::vector<double>(const std::vector<ShotRecord>& train,
                                                     const std::vector<ShotRecord>& test)>;

struct DuplicateConfig {
    DuplicateMode mode = DuplicateMode::seeded_random;
    std::uint64_t seed = 0;
};

/// Keeps exactly one shot per distinct coordinate pair. Output preserves the
/// input order of survivors.
std::vector<ShotRecord> resolve_duplicates(const std::vector<ShotRecord>& records,
                                           const DuplicateConfig& cfg,
                                           const FitContext& fit_context = {});

struct EncodedDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    std::vector<PitchLocation> locations;
    std::vector<std::string> column_names;
    SubsetTag subset_tag = SubsetTag::other_shots;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
};

std::vector<std::string> design_columns(SubsetTag tag);

Situation situation_of(const ShotRecord& rec);

/// One design row in the full column order for `tag`.
Eigen::VectorXd design_row(const PitchLocation& loc, const Situation& situation, SubsetTag tag,
                           const GeometryConfig& geometry = {});

bool in_subset(const ShotRecord& rec, SubsetTag tag);

/// Rows for every record in `tag`, in input order. Opponent proportions not
/// already annotated are computed over all of `records`.
EncodedDesign build_design(const std::vector<ShotRecord>& records, SubsetTag tag,
                           const GeometryConfig& geometry = {},
                           const OpponentConfig& opponent = {});

/// Keeps only the named columns, in the given order.
EncodedDesign select_columns(const EncodedDesign& design, const std::vector<std::string>& names);

/// Design restricted to the given row indices.
EncodedDesign subset_rows(const EncodedDesign& design, const std::vector<Eigen::Index>& rows);

/// Re-encodes one row against the column list of `design`.
Eigen::VectorXd project_row(const Eigen::VectorXd& full_row, SubsetTag tag,
                            const std::vector<std::string>& columns);

struct FactorLevelSummary {
    std::string factor;
    std::string level;
    std::size_t shots = 0;
    std::size_t goals = 0;
    double conversion_rate = 0.0;
    double share = 0.0;
};

std::vector<FactorLevelSummary> factor_summary(const std::vector<ShotRecord>& records);
void write_factor_summary_csv(std::ostream& out, const std::vector<FactorLevelSummary>& rows);

}  // namespace goalspot
