#pragma once

#include <stdexcept>

namespace goalspot {

/// Shot position relative to the center of the defended goal line, in yards.
/// `x` is the signed lateral offset, `y` the distance into the pitch.
struct PitchLocation {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PitchLocation&, const PitchLocation&) = default;
};

struct GeometryConfig {
    double pitch_length_yards = 120.0;
    double goal_width_yards = 8.0;
    double keeper_depth_yards = 2.0;

    void validate() const;
    double half_line() const { return pitch_length_yards / 2.0; }
};

class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PositionalCovariates {
    double log_distance;
    double cos_angle;
};

double shot_distance(const PitchLocation& loc);

/// Signed angle between the shot-to-goal-center segment and the central
/// bisector. Throws GeometryError("undefined angle") at the goal center.
double shot_angle(const PitchLocation& loc);

PositionalCovariates covariate_transforms(const PitchLocation& loc);

/// Keeper's-reach fallback used when the input data has no reach column.
///
/// The keeper stands on the bisector of the angle subtended by the posts at
/// the shot location, `keeper_depth_yards` off the goal line (capped at half
/// the shot's own depth so the keeper is always between ball and goal). The
/// returned value is the perpendicular distance from that point to the
/// shot-to-post lines; both lines are equidistant by the bisector property.
double keeper_reach_default(const PitchLocation& loc, const GeometryConfig& cfg = {});

bool beyond_half_line(const PitchLocation& loc, const GeometryConfig& cfg = {});

double euclidean_distance(const PitchLocation& a, const PitchLocation& b);

}  // namespace goalspot
