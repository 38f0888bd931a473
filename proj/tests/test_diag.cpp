#include "goalspot/exploratory_diag.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace goalspot;

TEST_CASE("Ripley K on a tiny pattern")
{
    const Window w{0, 10, 0, 10};
    const std::vector<PitchLocation> pts = {{1, 1}, {2, 1}, {5, 5}};
    const auto k = ripley_k_hat(pts, w, {0.5, 1.0, 10.0}, false);
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(100.0 / 9.0 * 2));
    CHECK(k[2] == doctest::Approx(100.0 / 9.0 * 6));
    CHECK_THROWS(ripley_k_hat(pts, Window{0, 0, 0, 10}, {1.0}));
    CHECK_THROWS(ripley_k_hat({{1, 1}}, w, {1.0}));
}

TEST_CASE("envelopes bracket CSR and are reproducible")
{
    const Window w;
    const auto pts = generate_point_pattern(PatternKind::csr, 200, w, 3);
    std::vector<double> radii;
    for (int a = 1; a <= 15; ++a)
        radii.push_back(a);
    const auto a = ripley_k(pts, w, radii, 39, 11);
    const auto b = ripley_k(pts, w, radii, 39, 11, false);
    CHECK(a.envelope_low == b.envelope_low);
    CHECK(a.envelope_high == b.envelope_high);
    int inside = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        CHECK(a.envelope_low[i] <= a.envelope_high[i]);
        inside += a.k_hat[i] >= a.envelope_low[i] && a.k_hat[i] <= a.envelope_high[i];
    }
    CHECK(inside >= 12);
    CHECK(a.k_theo[1] == doctest::Approx(4 * 3.141592653589793));
}

TEST_CASE("clustered pattern exceeds the CSR envelope at short range")
{
    const Window w;
    ClusterConfig cc;
    cc.dispersion = 2.0;
    const auto pts = generate_point_pattern(PatternKind::clustered, 200, w, 4, cc);
    const auto k = ripley_k(pts, w, {2, 5, 10}, 39, 12);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(k.k_hat[i] > k.envelope_high[i]);
}

TEST_CASE("knn graph")
{
    const std::vector<PitchLocation> pts = {{0, 1}, {1, 1}, {3, 1}, {0, 5}};
    const auto e = knn_graph(pts, 1);
    // 0->1, 1->0, 2->1, 3->0, deduplicated and sorted
    CHECK(e == std::vector<kernels::Edge>{{0, 1}, {0, 3}, {1, 2}});
    CHECK(default_k_neighbors(3957) == 62);
    CHECK(default_k_neighbors(4000) == 63);
    CHECK(default_k_neighbors(1) == 1);
}

TEST_CASE("join count test")
{
    std::vector<PitchLocation> pts;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 10; ++j) {
            pts.push_back({-30.0 + 3 * i, 1.0 + 3 * j});
            labels.push_back(i < 10 ? 1 : 0);
        }
    const auto res = join_count_test(pts, labels, 4, 199, 5);
    CHECK(res.rejects());
    CHECK(res.n01.p_value == doctest::Approx(1.0 / 200));
    CHECK(res.counts.n11 + res.counts.n00 + res.counts.n01 == res.total_joins);

    std::ostringstream out;
    write_joincount_csv(out, res);
    CHECK(out.str().find(",4,199,") != std::string::npos);

    std::vector<int> same(pts.size(), 1);
    CHECK_THROWS(join_count_test(pts, same, 4, 9, 1));
}
