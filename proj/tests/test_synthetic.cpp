#include "goalspot/exploratory_diag.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace goalspot;

TEST_CASE("spec validation")
{
    SyntheticSpec s;
    s.phi = 0.0;
    CHECK_THROWS(s.validate());
    s = {};
    s.columns.push_back("opponent");
    s.theta = Eigen::VectorXd::Zero(6);
    CHECK_THROWS(s.validate());
    s = {};
    s.theta = Eigen::VectorXd::Zero(2);
    CHECK_THROWS(s.validate());
}

TEST_CASE("generation is deterministic and consistent")
{
    SyntheticSpec s;
    s.n_shots = 300;
    s.seed = 5;
    s.theta << -0.2, -0.3, 0.4, 0.1, 0.2;
    const auto a = generate(s);
    const auto b = generate(s);
    REQUIRE(a.records.size() == 300);
    CHECK(a.truth.w == b.truth.w);
    CHECK(a.truth.r == b.truth.r);
    std::set<std::pair<double, double>> seen;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& r = a.records[i];
        CHECK(seen.emplace(r.location.x, r.location.y).second);
        CHECK(r.outcome == (a.truth.r[static_cast<Eigen::Index>(i)] > 0 ? 1 : 0));
        CHECK(s.window.contains(r.location));
    }
    // The truth design matches what build_design produces for the same columns.
    const auto d = select_columns(build_design(a.records, SubsetTag::other_shots), s.columns);
    CHECK((d.X - a.truth.X).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("large negative intercept gives almost no goals")
{
    SyntheticSpec s;
    s.n_shots = 200;
    s.columns = {"intercept"};
    s.theta = Eigen::VectorXd::Constant(1, -8.0);
    const auto d = generate(s);
    int goals = 0;
    for (const auto& r : d.records)
        goals += r.outcome;
    CHECK(goals == 0);
}

TEST_CASE("symmetric latent gives a goal rate near one half")
{
    SyntheticSpec s;
    s.n_shots = 2000;
    s.columns = {"intercept"};
    s.theta = Eigen::VectorXd::Zero(1);
    s.phi = 1.0;
    double rate = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        s.seed = seed;
        const auto d = generate(s);
        for (const auto& r : d.records)
            rate += r.outcome;
    }
    CHECK(rate / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("header share and grid layout")
{
    SyntheticSpec s;
    s.n_shots = 120;
    s.location_process = LocationProcess::grid;
    s.header_share = 0.5;
    s.columns = {"intercept", "home"};
    s.theta = Eigen::VectorXd::Zero(2);
    const auto d = generate(s);
    int headers = 0;
    for (const auto& r : d.records)
        headers += r.is_header();
    CHECK(headers > 30);
    CHECK(headers < 90);
}

TEST_CASE("point patterns")
{
    const Window w;
    const auto a = generate_point_pattern(PatternKind::csr, 100, w, 1);
    const auto b = generate_point_pattern(PatternKind::csr, 100, w, 1);
    CHECK(a.size() == 100);
    CHECK(a == b);
    for (const auto& p : a)
        CHECK(w.contains(p));
    CHECK_THROWS(generate_point_pattern(PatternKind::csr, 0, w, 1));
}

TEST_CASE("written records parse back without rejects")
{
    SyntheticSpec s;
    s.n_shots = 50;
    s.header_share = 0.3;
    s.columns = {"intercept"};
    s.theta = Eigen::VectorXd::Zero(1);
    const auto d = generate(s);
    std::ostringstream out;
    write_shots_csv(out, d.records);
    std::istringstream in(out.str());
    const auto back = parse_shots(in);
    CHECK(back.rejects.empty());
    REQUIRE(back.records.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(back.records[i].location == d.records[i].location);
        CHECK(back.records[i].keeper_reach == d.records[i].keeper_reach);
        CHECK(back.records[i].outcome == d.records[i].outcome);
    }
    std::ostringstream truth;
    write_truth_csv(truth, d);
    const auto text = truth.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 51);
}
