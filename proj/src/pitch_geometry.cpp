#include "goalspot/pitch_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace goalspot {

void GeometryConfig::validate() const
{
    if (!(pitch_length_yards > 0.0) || !(goal_width_yards > 0.0))
        throw GeometryError("pitch length and goal width must be positive");
    if (!(keeper_depth_yards >= 0.0))
        throw GeometryError("keeper depth must be nonnegative");
}

double shot_distance(const PitchLocation& loc)
{
    return std::hypot(loc.x, loc.y);
}

double shot_angle(const PitchLocation& loc)
{
    if (loc.x == 0.0 && loc.y == 0.0)
        throw GeometryError("undefined angle");
    return std::atan2(loc.x, loc.y);
}

PositionalCovariates covariate_transforms(const PitchLocation& loc)
{
    const double d = shot_distance(loc);
    if (d == 0.0)
        throw GeometryError("log of zero distance");
    // cos(atan2(x, y)) == y / d
    return {std::log(d), loc.y / d};
}

double keeper_reach_default(const PitchLocation& loc, const GeometryConfig& cfg)
{
    const double half_goal = cfg.goal_width_yards / 2.0;
    const double lx = -half_goal - loc.x, ly = -loc.y;  // shot -> left post
    const double rx = half_goal - loc.x, ry = -loc.y;   // shot -> right post
    const double ln = std::hypot(lx, ly), rn = std::hypot(rx, ry);
    if (ln == 0.0 || rn == 0.0)
        return 0.0;

    // Unit bisector of the angle at the shot location.
    double bx = lx / ln + rx / rn;
    double by = ly / ln + ry / rn;
    const double bn = std::hypot(bx, by);
    if (bn == 0.0 || loc.y <= 0.0)
        return 0.0;  // shot on the goal line between the posts
    bx /= bn;
    by /= bn;

    const double depth = std::min(cfg.keeper_depth_yards, loc.y / 2.0);
    const double t = (depth - loc.y) / by;  // by < 0 whenever y > 0
    const double kx = loc.x + t * bx, ky = loc.y + t * by;

    // Distance from the keeper point to the shot-to-left-post line.
    const double cross = std::abs(lx * (ky - loc.y) - ly * (kx - loc.x));
    return cross / ln;
}

bool beyond_half_line(const PitchLocation& loc, const GeometryConfig& cfg)
{
    return loc.y > cfg.half_line();
}

double euclidean_distance(const PitchLocation& a, const PitchLocation& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace goalspot
