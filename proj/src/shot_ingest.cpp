#include "goalspot/shot_ingest.hpp"

#include "goalspot/random.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace goalspot {

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

struct FieldError {
    std::string reason;
};

double parse_double(const std::string& text, const char* column)
{
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw FieldError{std::string("unparseable ") + column + " '" + text + "'"};
    return v;
}

long parse_int(const std::string& text, const char* column)
{
    long v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw FieldError{std::string("unparseable ") + column + " '" + text + "'"};
    return v;
}

bool parse_flag(const std::string& text, const char* column)
{
    const long v = parse_int(text, column);
    if (v != 0 && v != 1)
        throw FieldError{std::string(column) + " must be 0 or 1"};
    return v == 1;
}

BodyPart parse_body_part(const std::string& text)
{
    if (text == "H") return BodyPart::header;
    if (text == "L") return BodyPart::left_foot;
    if (text == "R") return BodyPart::right_foot;
    if (text == "O") return BodyPart::other;
    throw FieldError{"body_part must be one of H,L,R,O"};
}

const std::vector<std::string> kMandatoryColumns = {
    "shot_id", "match_id", "player_id", "opponent_id", "x",          "y",
    "outcome", "body_part", "is_home",  "half",        "minute",     "is_stoppage",
    "goal_diff", "is_penalty", "is_own_goal"};

}  // namespace

const char* to_string(SubsetTag tag)
{
    return tag == SubsetTag::headers ? "headers" : "others";
}

SubsetTag parse_subset(const std::string& text)
{
    if (text == "headers")
        return SubsetTag::headers;
    if (text == "others" || text == "other_shots")
        return SubsetTag::other_shots;
    throw std::invalid_argument("unknown subset '" + text + "' (expected headers|others)");
}

char body_part_code(BodyPart bp)
{
    switch (bp) {
    case BodyPart::header: return 'H';
    case BodyPart::left_foot: return 'L';
    case BodyPart::right_foot: return 'R';
    case BodyPart::other: return 'O';
    }
    return 'O';
}

GoalDiffState ShotRecord::goal_diff_state() const
{
    if (goal_diff < 0)
        return GoalDiffState::trailing;
    if (goal_diff > 0)
        return GoalDiffState::leading;
    return GoalDiffState::level;
}

ParseResult parse_shots(std::istream& in)
{
    ParseResult result;
    std::string line;
    if (!std::getline(in, line))
        throw IngestError("empty input: header row missing");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    std::map<std::string, std::size_t> index;
    const auto header = split_csv_line(line);
    for (std::size_t i = 0; i < header.size(); ++i)
        index[trim(header[i])] = i;
    for (const auto& col : kMandatoryColumns)
        if (!index.count(col))
            throw IngestError("missing mandatory column '" + col + "'");
    result.has_keeper_reach_column = index.count("keeper_reach") > 0;

    std::set<std::string> seen_ids;
    std::size_t line_no = 1;
    std::int64_t order = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            result.rejects.push_back({line_no, "expected " + std::to_string(header.size()) +
                                                   " fields, found " +
                                                   std::to_string(fields.size())});
            continue;
        }
        const auto get = [&](const std::string& col) { return trim(fields[index.at(col)]); };

        try {
            ShotRecord rec;
            rec.shot_id = get("shot_id");
            rec.match_id = get("match_id");
            rec.player_id = get("player_id");
            rec.opponent_id = get("opponent_id");
            if (rec.shot_id.empty())
                throw FieldError{"empty shot_id"};
            if (seen_ids.count(rec.shot_id))
                throw FieldError{"duplicate shot_id '" + rec.shot_id + "'"};
            for (const char* id : {"match_id", "player_id", "opponent_id"})
                if (get(id).empty())
                    rec.missing.emplace_back(id);

            const auto numeric = [&](const char* col, auto parse, auto& slot) {
                const std::string text = get(col);
                if (text.empty())
                    rec.missing.emplace_back(col);
                else
                    slot = parse(text, col);
            };
            numeric("x", parse_double, rec.location.x);
            numeric("y", parse_double, rec.location.y);
            if (rec.location.y < 0.0)
                throw FieldError{"y must be nonnegative"};

            if (const auto text = get("outcome"); text.empty())
                rec.missing.emplace_back("outcome");
            else {
                const long v = parse_int(text, "outcome");
                if (v != 0 && v != 1)
                    throw FieldError{"outcome must be 0 or 1, got '" + text + "'"};
                rec.outcome = static_cast<int>(v);
            }

            if (const auto text = get("body_part"); text.empty())
                rec.missing.emplace_back("body_part");
            else
                rec.body_part = parse_body_part(text);

            numeric("is_home", parse_flag, rec.is_home);
            numeric("is_stoppage", parse_flag, rec.is_stoppage);

            if (const auto text = get("half"); text.empty())
                rec.missing.emplace_back("half");
            else {
                const long half = parse_int(text, "half");
                if (half < 1)
                    throw FieldError{"half must be a positive integer"};
                rec.is_first_half = half == 1;
            }

            if (const auto text = get("minute"); !text.empty()) {
                rec.minute = static_cast<int>(parse_int(text, "minute"));
                if (rec.minute < 0)
                    throw FieldError{"minute must be nonnegative"};
            }

            if (const auto text = get("goal_diff"); text.empty())
                rec.missing.emplace_back("goal_diff");
            else
                rec.goal_diff = static_cast<int>(parse_int(text, "goal_diff"));

            if (result.has_keeper_reach_column) {
                if (const auto text = get("keeper_reach"); !text.empty()) {
                    const double k = parse_double(text, "keeper_reach");
                    if (k < 0.0)
                        throw FieldError{"keeper_reach must be nonnegative"};
                    rec.keeper_reach = k;
                }
            }

            if (const auto text = get("is_penalty"); !text.empty())
                rec.is_penalty = parse_flag(text, "is_penalty");
            if (const auto text = get("is_own_goal"); !text.empty())
                rec.is_own_goal = parse_flag(text, "is_own_goal");

            rec.timestamp_order = order++;
            seen_ids.insert(rec.shot_id);
            result.records.push_back(std::move(rec));
        }
        catch (const FieldError& e) {
            result.rejects.push_back({line_no, e.reason});
        }
    }
    return result;
}

ParseResult parse_shots_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IngestError("cannot open '" + path + "'");
    return parse_shots(in);
}

void write_shots_csv(std::ostream& out, const std::vector<ShotRecord>& records)
{
    out << kShotCsvHeader << '\n';
    char buf[64];
    const auto num = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    };
    for (const auto& r : records) {
        out << r.shot_id << ',' << r.match_id << ',' << r.player_id << ',' << r.opponent_id
            << ',' << num(r.location.x) << ',' << num(r.location.y) << ',' << r.outcome << ','
            << body_part_code(r.body_part) << ',' << (r.is_home ? 1 : 0) << ','
            << (r.is_first_half ? 1 : 2) << ',' << r.minute << ',' << (r.is_stoppage ? 1 : 0)
            << ',' << r.goal_diff << ',' << (r.keeper_reach ? num(*r.keeper_reach) : "") << ','
            << (r.is_penalty ? 1 : 0) << ',' << (r.is_own_goal ? 1 : 0) << '\n';
    }
}

void write_rejects_csv(std::ostream& out, const std::vector<RejectedRow>& rejects)
{
    out << "line,reason\n";
    for (const auto& r : rejects) {
        std::string reason = r.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        out << r.line << ',' << reason << '\n';
    }
}

ExclusionResult apply_exclusions(const std::vector<ShotRecord>& records,
                                 const GeometryConfig& geometry)
{
    ExclusionResult out;
    for (const auto& rec : records) {
        std::string reason;
        if (rec.is_penalty)
            reason = "penalty";
        else if (rec.is_own_goal)
            reason = "own goal";
        else if (!rec.missing.empty())
            reason = "missing " + rec.missing.front();
        else if (beyond_half_line(rec.location, geometry))
            reason = "beyond half line";
        else if (rec.location.x == 0.0 && rec.location.y == 0.0)
            reason = "zero distance";

        if (reason.empty())
            out.kept.push_back(rec);
        else
            out.dropped.push_back({rec, std::move(reason)});
    }
    return out;
}

double opponent_proportion(const std::vector<ShotRecord>& records, std::int64_t as_of,
                           const std::string& opponent_id, const OpponentConfig& cfg)
{
    std::size_t shots = 0, goals = 0, all_shots = 0, all_goals = 0;
    for (const auto& r : records) {
        if (r.timestamp_order >= as_of)
            continue;
        ++all_shots;
        all_goals += r.outcome;
        if (r.opponent_id == opponent_id) {
            ++shots;
            goals += r.outcome;
        }
    }
    if (shots > 0)
        return static_cast<double>(goals) / static_cast<double>(shots);
    if (cfg.cold_start == ColdStart::league_mean && all_shots > 0)
        return static_cast<double>(all_goals) / static_cast<double>(all_shots);
    return cfg.default_value;
}

void annotate_opponent_proportions(std::vector<ShotRecord>& records, const OpponentConfig& cfg)
{
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].timestamp_order < records[b].timestamp_order;
    });

    struct Tally {
        std::size_t shots = 0, goals = 0;
    };
    std::unordered_map<std::string, Tally> by_opponent;
    Tally league;
    std::size_t i = 0;
    while (i < order.size()) {
        // Shots sharing a timestamp see only strictly earlier history.
        std::size_t j = i;
        const auto ts = records[order[i]].timestamp_order;
        while (j < order.size() && records[order[j]].timestamp_order == ts)
            ++j;
        for (std::size_t k = i; k < j; ++k) {
            auto& rec = records[order[k]];
            const auto it = by_opponent.find(rec.opponent_id);
            if (it != by_opponent.end() && it->second.shots > 0)
                rec.opponent_proportion =
                    static_cast<double>(it->second.goals) / static_cast<double>(it->second.shots);
            else if (cfg.cold_start == ColdStart::league_mean && league.shots > 0)
                rec.opponent_proportion =
                    static_cast<double>(league.goals) / static_cast<double>(league.shots);
            else
                rec.opponent_proportion = cfg.default_value;
        }
        for (std::size_t k = i; k < j; ++k) {
            const auto& rec = records[order[k]];
            auto& t = by_opponent[rec.opponent_id];
            ++t.shots;
            t.goals += rec.outcome;
            ++league.shots;
            league.goals += rec.outcome;
        }
        i = j;
    }
}

std::vector<ShotRecord> resolve_duplicates(const std::vector<ShotRecord>& records,
                                           const DuplicateConfig& cfg,
                                           const FitContext& fit_context)
{
    if (cfg.mode == DuplicateMode::refit && !fit_context)
        throw std::invalid_argument("refit duplicate resolution requires a fit context");

    // Groups of exactly coincident coordinates, in first-appearance order.
    std::map<std::pair<double, double>, std::vector<std::size_t>> by_coord;
    std::vector<std::pair<double, double>> coord_order;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto key = std::make_pair(records[i].location.x, records[i].location.y);
        auto& members = by_coord[key];
        if (members.empty())
            coord_order.push_back(key);
        members.push_back(i);
    }

    std::vector<std::vector<std::size_t>> groups;
    for (const auto& key : coord_order)
        if (by_coord[key].size() > 1)
            groups.push_back(by_coord[key]);
    if (groups.empty())
        return records;

    std::vector<char> keep(records.size(), 1);
    for (const auto& g : groups)
        for (std::size_t m = 1; m < g.size(); ++m)
            keep[g[m]] = 0;  // provisional representative: first member

    Rng rng(derive_seed(cfg.seed, 0x6475706cULL));
    for (const auto& group : groups) {
        std::size_t winner = group.front();
        if (cfg.mode == DuplicateMode::seeded_random) {
            std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
            winner = group[pick(rng)];
        }
        else {
            for (auto idx : group)
                keep[idx] = 0;
            double best_error = std::numeric_limits<double>::infinity();
            for (auto candidate : group) {
                std::vector<ShotRecord> train, test;
                for (std::size_t i = 0; i < records.size(); ++i)
                    if (keep[i] || i == candidate)
                        train.push_back(records[i]);
                for (auto other : group)
                    if (other != candidate)
                        test.push_back(records[other]);
                const auto p = fit_context(train, test);
                if (p.size() != test.size())
                    throw std::runtime_error("fit context returned wrong number of predictions");
                double err = 0.0;
                for (std::size_t t = 0; t < test.size(); ++t) {
                    const double d = test[t].outcome - p[t];
                    err += d * d;
                }
                if (err < best_error) {
                    best_error = err;
                    winner = candidate;
                }
            }
        }
        for (auto idx : group)
            keep[idx] = idx == winner ? 1 : 0;
    }

    std::vector<ShotRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (keep[i])
            out.push_back(records[i]);
    return out;
}

std::vector<std::string> design_columns(SubsetTag tag)
{
    std::vector<std::string> cols = {"intercept", "log_distance", "cos_angle", "keeper_reach",
                                     "opponent",  "home",         "first_half", "gd_level",
                                     "gd_leading", "stoppage"};
    if (tag == SubsetTag::other_shots) {
        cols.emplace_back("left_foot");
        cols.emplace_back("right_foot");
    }
    return cols;
}

Situation situation_of(const ShotRecord& rec)
{
    Situation s;
    s.body_part = rec.body_part;
    s.is_home = rec.is_home;
    s.is_first_half = rec.is_first_half;
    s.is_stoppage = rec.is_stoppage;
    s.goal_diff = rec.goal_diff_state();
    s.keeper_reach = rec.keeper_reach;
    s.opponent_proportion = rec.opponent_proportion.value_or(0.0);
    return s;
}

Eigen::VectorXd design_row(const PitchLocation& loc, const Situation& s, SubsetTag tag,
                           const GeometryConfig& geometry)
{
    const auto pos = covariate_transforms(loc);
    const Eigen::Index p = tag == SubsetTag::other_shots ? 12 : 10;
    Eigen::VectorXd row(p);
    row[0] = 1.0;
    row[1] = pos.log_distance;
    row[2] = pos.cos_angle;
    row[3] = s.keeper_reach ? *s.keeper_reach : keeper_reach_default(loc, geometry);
    row[4] = s.opponent_proportion;
    row[5] = s.is_home ? 1.0 : 0.0;
    row[6] = s.is_first_half ? 1.0 : 0.0;
    row[7] = s.goal_diff == GoalDiffState::level ? 1.0 : 0.0;
    row[8] = s.goal_diff == GoalDiffState::leading ? 1.0 : 0.0;
    row[9] = s.is_stoppage ? 1.0 : 0.0;
    if (tag == SubsetTag::other_shots) {
        row[10] = s.body_part == BodyPart::left_foot ? 1.0 : 0.0;
        row[11] = s.body_part == BodyPart::right_foot ? 1.0 : 0.0;
    }
    return row;
}

bool in_subset(const ShotRecord& rec, SubsetTag tag)
{
    return rec.is_header() == (tag == SubsetTag::headers);
}

EncodedDesign build_design(const std::vector<ShotRecord>& records, SubsetTag tag,
                           const GeometryConfig& geometry, const OpponentConfig& opponent)
{
    std::vector<const ShotRecord*> rows;
    for (const auto& r : records)
        if (in_subset(r, tag))
            rows.push_back(&r);
    if (rows.empty())
        throw std::invalid_argument(std::string("empty subset: no ") + to_string(tag) +
                                    " in input");

    const bool need_opponent = std::any_of(rows.begin(), rows.end(),
                                           [](const auto* r) { return !r->opponent_proportion; });
    std::vector<ShotRecord> annotated;
    if (need_opponent) {
        annotated = records;
        annotate_opponent_proportions(annotated, opponent);
    }

    EncodedDesign d;
    d.subset_tag = tag;
    d.column_names = design_columns(tag);
    const auto n = static_cast<Eigen::Index>(rows.size());
    d.X.resize(n, static_cast<Eigen::Index>(d.column_names.size()));
    d.Y.resize(n);
    d.locations.reserve(rows.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const ShotRecord* rec = rows[static_cast<std::size_t>(i)];
        Situation s = situation_of(*rec);
        if (need_opponent)
            s.opponent_proportion = *annotated[static_cast<std::size_t>(rec - records.data())]
                                         .opponent_proportion;
        d.X.row(i) = design_row(rec->location, s, tag, geometry).transpose();
        d.Y[i] = rec->outcome;
        d.locations.push_back(rec->location);
    }
    return d;
}

EncodedDesign select_columns(const EncodedDesign& design, const std::vector<std::string>& names)
{
    EncodedDesign out;
    out.subset_tag = design.subset_tag;
    out.Y = design.Y;
    out.locations = design.locations;
    out.column_names = names;
    out.X.resize(design.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto it = std::find(design.column_names.begin(), design.column_names.end(), names[j]);
        if (it == design.column_names.end())
            throw std::invalid_argument("unknown design column '" + names[j] + "'");
        out.X.col(static_cast<Eigen::Index>(j)) =
            design.X.col(std::distance(design.column_names.begin(), it));
    }
    return out;
}

EncodedDesign subset_rows(const EncodedDesign& design, const std::vector<Eigen::Index>& rows)
{
    EncodedDesign out;
    out.subset_tag = design.subset_tag;
    out.column_names = design.column_names;
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.X.resize(n, design.cols());
    out.Y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto r = rows[static_cast<std::size_t>(i)];
        out.X.row(i) = design.X.row(r);
        out.Y[i] = design.Y[r];
        out.locations.push_back(design.locations[static_cast<std::size_t>(r)]);
    }
    return out;
}

Eigen::VectorXd project_row(const Eigen::VectorXd& full_row, SubsetTag tag,
                            const std::vector<std::string>& columns)
{
    const auto all = design_columns(tag);
    if (full_row.size() != static_cast<Eigen::Index>(all.size()))
        throw std::invalid_argument("design row length does not match subset");
    Eigen::VectorXd out(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto it = std::find(all.begin(), all.end(), columns[j]);
        if (it == all.end())
            throw std::invalid_argument("covariate mismatch: column '" + columns[j] +
                                        "' is not available for " + to_string(tag));
        out[static_cast<Eigen::Index>(j)] = full_row[std::distance(all.begin(), it)];
    }
    return out;
}

std::vector<FactorLevelSummary> factor_summary(const std::vector<ShotRecord>& records)
{
    struct Level {
        const char* factor;
        const char* level;
        std::function<bool(const ShotRecord&)> member;
    };
    const std::vector<Level> levels = {
        {"venue", "Home", [](const ShotRecord& r) { return r.is_home; }},
        {"venue", "Away", [](const ShotRecord& r) { return !r.is_home; }},
        {"half", "First half", [](const ShotRecord& r) { return r.is_first_half; }},
        {"half", "Second half", [](const ShotRecord& r) { return !r.is_first_half; }},
        {"body_part", "Header", [](const ShotRecord& r) { return r.body_part == BodyPart::header; }},
        {"body_part", "Left Foot",
         [](const ShotRecord& r) { return r.body_part == BodyPart::left_foot; }},
        {"body_part", "Right Foot",
         [](const ShotRecord& r) { return r.body_part == BodyPart::right_foot; }},
        {"body_part", "Other", [](const ShotRecord& r) { return r.body_part == BodyPart::other; }},
        {"goal_diff", "Leading",
         [](const ShotRecord& r) { return r.goal_diff_state() == GoalDiffState::leading; }},
        {"goal_diff", "Scores level",
         [](const ShotRecord& r) { return r.goal_diff_state() == GoalDiffState::level; }},
        {"goal_diff", "Trailing",
         [](const ShotRecord& r) { return r.goal_diff_state() == GoalDiffState::trailing; }},
        {"time", "Regulation time", [](const ShotRecord& r) { return !r.is_stoppage; }},
        {"time", "Stoppage time", [](const ShotRecord& r) { return r.is_stoppage; }},
    };

    std::vector<FactorLevelSummary> out;
    const double total = static_cast<double>(records.size());
    for (const auto& lv : levels) {
        FactorLevelSummary row{lv.factor, lv.level};
        for (const auto& r : records) {
            if (!lv.member(r))
                continue;
            ++row.shots;
            row.goals += static_cast<std::size_t>(r.outcome);
        }
        row.conversion_rate = row.shots ? static_cast<double>(row.goals) / row.shots : 0.0;
        row.share = total > 0 ? static_cast<double>(row.shots) / total : 0.0;
        out.push_back(row);
    }
    return out;
}

void write_factor_summary_csv(std::ostream& out, const std::vector<FactorLevelSummary>& rows)
{
    out << "factor,level,goals,misses,total,conversion_rate,share\n";
    for (const auto& r : rows)
        out << r.factor << ',' << r.level << ',' << r.goals << ',' << (r.shots - r.goals) << ','
            << r.shots << ',' << r.conversion_rate << ',' << r.share << '\n';
}

}  // namespace goalspot
