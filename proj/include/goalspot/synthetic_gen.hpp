#pragma once

#include "goalspot/exploratory_diag.hpp"
#include "goalspot/shot_ingest.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace goalspot {

enum class LocationProcess { uniform_half, clustered, grid };

LocationProcess parse_location_process(const std::string& text);
const char* to_string(LocationProcess p);

struct ClusterConfig {
    double parents_per_100 = 5.0;  // parent points per 100 offspring
    double dispersion = 2.0;       // offspring sd around the parent, yards
};

struct SyntheticSpec {
    int n_shots = 1000;
    /// Design columns carrying a true coefficient; must come from
    /// design_columns(subset) and may not include "opponent".
    std::vector<std::string> columns = {"intercept", "log_distance", "cos_angle", "keeper_reach",
                                        "home"};
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(5);
    double phi = 0.1;
    double sigma2 = 1.0;  // both w and e
    LocationProcess location_process = LocationProcess::uniform_half;
    Window window;
    ClusterConfig cluster;
    double header_share = 0.0;
    double home_rate = 0.56;
    int n_players = 50;
    int n_matches = 100;
    int n_teams = 20;
    std::uint64_t seed = 0;
    GeometryConfig geometry;

    void validate() const;
};

/// Hidden state behind a synthetic data set, one entry per record.
struct SyntheticTruth {
    std::vector<std::string> columns;
    Eigen::MatrixXd X;
    Eigen::VectorXd w;
    Eigen::VectorXd r;
    Eigen::VectorXd p_true;  // Phi((x' theta + w) / sigma)
};

struct SyntheticData {
    std::vector<ShotRecord> records;
    SyntheticTruth truth;
};

/// r = X theta + w + e with w ~ N(0, sigma2 Sigma_w(phi)), e ~ N(0, sigma2 I),
/// Y = 1(r > 0). Headers and other shots share one spatial field.
SyntheticData generate(const SyntheticSpec& spec);

enum class PatternKind { csr, clustered };

std::vector<PitchLocation> generate_point_pattern(PatternKind kind, int n, const Window& window,
                                                  std::uint64_t seed,
                                                  const ClusterConfig& cluster = {});

/// shot_id, w, r, p_true
void write_truth_csv(std::ostream& out, const SyntheticData& data);

}  // namespace goalspot
