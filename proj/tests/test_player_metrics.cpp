#include "goalspot/player_metrics.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <doctest.h>

#include <sstream>

using namespace goalspot;

TEST_CASE("ratings from hand-computed fixtures")
{
    const std::vector<double> y = {1, 0, 1, 0, 0};
    const std::vector<double> p = {0.25, 0.5, 0.75, 0.125, 0.375};
    const std::vector<std::string> m = {"g1", "g1", "g2", "g3", "g3"};
    const auto r = compute_rating("k", SubsetTag::other_shots, y, p, m);
    CHECK(r.n_games == 3);
    CHECK(r.n_shots == 5);
    CHECK(r.sp == (0.75 - 0.5 + 0.25 - 0.125 - 0.375) / 3.0);
    CHECK(r.ps == (0.25 + 0.5 + 0.75 + 0.125 + 0.375) / 3.0);
    for (double sv : r.shooting_values) {
        CHECK(sv >= -1.0);
        CHECK(sv <= 1.0);
    }
}

TEST_CASE("perfect forecasts give zero prowess")
{
    const std::vector<double> y = {1, 0, 1};
    const std::vector<std::string> m = {"a", "b", "b"};
    const auto r = compute_rating("k", SubsetTag::headers, y, y, m);
    CHECK(r.sp == 0.0);
    CHECK(r.ps == 1.0);
}

TEST_CASE("volume example")
{
    const auto make = [](int shots) {
        std::vector<double> y(static_cast<std::size_t>(shots), 1.0);
        std::vector<double> p(static_cast<std::size_t>(shots), 0.5);
        std::vector<std::string> m(static_cast<std::size_t>(shots), "g");
        return compute_rating("k" + std::to_string(shots), SubsetTag::other_shots, y, p, m);
    };
    const auto two = make(2), ten = make(10);
    CHECK(two.sp == 1.0);
    CHECK(ten.sp == 5.0);
    const auto ranked = rank_players({two, ten}, Measure::sp, 1);
    CHECK(ranked.front().player_id == "k10");
}

TEST_CASE("adding a zero-value shot to an existing game")
{
    const std::vector<std::string> m = {"g1", "g2"};
    const auto base = compute_rating("k", SubsetTag::other_shots, std::vector<double>{1, 0},
                                     std::vector<double>{0.5, 0.25}, m);
    const auto more = compute_rating("k", SubsetTag::other_shots, std::vector<double>{1, 0, 1},
                                     std::vector<double>{0.5, 0.25, 1.0},
                                     std::vector<std::string>{"g1", "g2", "g2"});
    CHECK(more.sp == base.sp);
    CHECK(more.ps == doctest::Approx(base.ps + 1.0 / 2));
}

TEST_CASE("ranking filter and ties")
{
    PlayerRating a{"a", SubsetTag::other_shots, 0.5, 1.0, 25, 5, {}};
    PlayerRating b{"b", SubsetTag::other_shots, 0.5, 2.0, 30, 5, {}};
    PlayerRating c{"c", SubsetTag::other_shots, 0.9, 0.1, 5, 2, {}};
    PlayerRating d{"d", SubsetTag::other_shots, 0.5, 2.0, 30, 5, {}};
    const auto r = rank_players({a, b, c, d}, Measure::sp, 20);
    REQUIRE(r.size() == 3);
    CHECK(r[0].player_id == "b");
    CHECK(r[1].player_id == "d");
    CHECK(r[2].player_id == "a");
    CHECK(rank_players({c}, Measure::ps, 20).empty());
    CHECK(default_min_shots(SubsetTag::headers) == 10);
    CHECK(default_min_shots(SubsetTag::other_shots) == 20);
}

TEST_CASE("histograms conserve counts")
{
    std::vector<PlayerRating> rs;
    for (int i = 0; i < 37; ++i)
        rs.push_back({"p" + std::to_string(i), SubsetTag::other_shots, 0.1 * (i % 7) - 0.3,
                      0.05 * i, 10, 3, {}});
    const auto h = rating_histograms(rs, 8);
    int total = 0;
    for (const auto& b : h.sp)
        total += b.count;
    CHECK(total == 37);
    CHECK(h.ps.size() == 8);
    const auto one = rating_histograms({rs[0]});
    CHECK(one.sp.size() == 1);
    CHECK(one.sp[0].count == 1);
    CHECK_THROWS(rating_histograms({}));
}

TEST_CASE("leave-player-out fits exclude the player's shots")
{
    SyntheticSpec s;
    s.n_shots = 90;
    s.n_players = 4;
    s.columns = {"intercept", "log_distance"};
    s.theta = Eigen::Vector2d(0.5, -0.4);
    s.seed = 8;
    const auto data = generate(s);
    const auto train = leave_player_out(data.records, "p0002", SubsetTag::other_shots);
    for (const auto& t : train)
        CHECK(t.player_id != "p0002");

    RatingFitConfig cfg;
    cfg.columns = s.columns;
    cfg.prior = {3.0, 2.0};
    cfg.chain.burn_in = 40;
    cfg.chain.n_samples = 20;
    const auto one = rate_all(data.records, SubsetTag::other_shots, cfg, 1);
    const auto two = rate_all(data.records, SubsetTag::other_shots, cfg, 3);
    REQUIRE(one.size() == 4);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].player_id == two[i].player_id);
        CHECK(one[i].sp == two[i].sp);
        CHECK(one[i].ps >= 0.0);
    }
    const auto only = rate_all(data.records, SubsetTag::other_shots, cfg, 1, {"p0003"});
    REQUIRE(only.size() == 1);
    CHECK(only[0].player_id == one[2].player_id);
    CHECK(only[0].sp == one[2].sp);
    CHECK_THROWS(rate_player(data.records, "nobody", SubsetTag::other_shots, cfg));

    std::ostringstream out;
    write_ratings_csv(out, one);
    CHECK(out.str().rfind("player_id,sp,ps,n_shots,n_games\n", 0) == 0);
}
