#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "mpindep/calibrate.hpp"

using namespace mpindep;

TEST_CASE("order statistics: 1..1000 at alpha = 0.05 gives (25, 976)") {
    std::vector<double> s(1000);
    std::iota(s.begin(), s.end(), 1.0);
    const auto [lo, hi] = order_statistic_quantiles(s, 0.05);
    CHECK(lo == doctest::Approx(25.0));
    CHECK(hi == doctest::Approx(976.0));
}

TEST_CASE("order statistics: constant sample collapses the pair") {
    const std::vector<double> s(500, 3.25);
    const auto [lo, hi] = order_statistic_quantiles(s, 0.05);
    CHECK(lo == doctest::Approx(3.25));
    CHECK(hi == doctest::Approx(3.25));
}

TEST_CASE("order statistics: too few replicates for the tail index") {
    const std::vector<double> s(30, 1.0);  // floor(30 * 0.025) = 0
    CHECK_THROWS_AS(order_statistic_quantiles(s, 0.05), InsufficientReplicates);
}

TEST_CASE("self-calibration size equals the order-statistic design value") {
    // Evaluating the calibration replicates against their own critical pair
    // must reject exactly 2 floor(K alpha / 2) of them.
    ModelSpec null_model = ModelSpec::parse("iid");
    null_model.n = 40;
    null_model.p = 20;
    const int K = 500;
    const WeightMeasure w = WeightMeasure::uniform();
    const NullCalibration calib =
        calibrate_model(null_model, K, 0.05, 99, w, 4);
    const std::vector<double> stats = replicate_statistics(
        null_model, K, 99, StreamRole::calibration, w, 4);
    int rejected = 0;
    for (double s : stats)
        if (s < calib.lower_q || s > calib.upper_q) ++rejected;
    CHECK(rejected == 2 * int(K * 0.05 / 2) - 2);  // critical points excluded
}

TEST_CASE("replicate statistics are thread-count invariant") {
    ModelSpec m = ModelSpec::parse("ma1");
    m.n = 30;
    m.p = 15;
    const WeightMeasure w = WeightMeasure::uniform();
    const auto one = replicate_statistics(m, 64, 7, StreamRole::evaluation, w, 1);
    const auto four = replicate_statistics(m, 64, 7, StreamRole::evaluation, w, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == four[i]);
}

TEST_CASE("empirical size under the null is near alpha") {
    const double a = empirical_size(50, 25, Innovation::normal, 500, 500, 0.05,
                                    2024, WeightMeasure::uniform(), 4);
    CHECK(a >= 0.02);
    CHECK(a <= 0.10);
}

TEST_CASE("null model power reduces to size") {
    ModelSpec m = ModelSpec::parse("iid");
    m.n = 40;
    m.p = 20;
    const PowerResult r =
        empirical_power(m, 500, 500, 0.05, 11, WeightMeasure::uniform(), 4);
    CHECK(std::abs(r.power - 0.05) <= 0.03);
}

TEST_CASE("power estimates are consistent across seeds at a strong cell") {
    ModelSpec m = ModelSpec::parse("ma1");
    m.n = 100;
    m.p = 20;
    const PowerResult r =
        empirical_power(m, 300, 300, 0.05, 5, WeightMeasure::uniform(), 4);
    CHECK(r.power >= 0.9);
}

TEST_CASE("power grows with the sample size") {
    ModelSpec small = ModelSpec::parse("ma1");
    small.n = 20;
    small.p = 20;
    ModelSpec large = small;
    large.n = 100;
    const WeightMeasure w = WeightMeasure::uniform();
    const double b_small = empirical_power(small, 300, 300, 0.05, 8, w, 4).power;
    const double b_large = empirical_power(large, 300, 300, 0.05, 8, w, 4).power;
    CHECK(b_large >= b_small - 0.05);
}

TEST_CASE("calibration metadata matches its design") {
    ModelSpec m = ModelSpec::parse("iid");
    m.n = 60;
    m.p = 30;
    const WeightMeasure w = WeightMeasure::uniform(0.0, 0.3);
    const NullCalibration c = calibrate_model(m, 200, 0.05, 3, w, 2);
    CHECK(c.n == 60);
    CHECK(c.p == 30);
    CHECK(c.alpha == doctest::Approx(0.05));
    CHECK(c.weight_fingerprint == w.fingerprint());
    CHECK(int(c.sorted_stats.size()) == 200);
    CHECK(std::is_sorted(c.sorted_stats.begin(), c.sorted_stats.end()));
    CHECK(c.lower_q <= c.upper_q);
}
