#include <doctest.h>

#include <cmath>
#include <random>

#include "mpindep/lrt.hpp"
#include "mpindep/rng.hpp"

using namespace mpindep;

namespace {

DataMatrix random_real(int n, int p, std::uint64_t seed) {
    auto eng = make_engine(seed);
    std::normal_distribution<double> d;
    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = d(eng);
    return DataMatrix::real(std::move(x));
}

}  // namespace

TEST_CASE("LRT: orthogonal centered columns give statistic 0, p-value 1") {
    // Both columns are mean 0 and mutually orthogonal, so the centered
    // covariance is exactly diagonal and every L_k equals 1.
    Eigen::MatrixXd x(4, 2);
    x << 1, 1, -1, 1, 1, -1, -1, -1;
    const LrtResult r = lrt_statistic(DataMatrix::real(x));
    CHECK_FALSE(r.degenerate);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.dof == 1);
    REQUIRE(r.p_value.has_value());
    // The statistic is 0 up to rounding; chi-square(1) mass near 0 scales
    // like sqrt(x), so the p-value sits within ~1e-8 of 1.
    CHECK(*r.p_value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("LRT: statistic is nonnegative and scale invariant") {
    const DataMatrix x = random_real(50, 8, 61);
    const LrtResult base = lrt_statistic(x);
    CHECK_FALSE(base.degenerate);
    CHECK(base.statistic >= 0.0);
    CHECK(base.dof == 8 * 7 / 2);

    DataMatrix scaled = x;
    scaled.re *= 17.5;
    const LrtResult s = lrt_statistic(scaled);
    CHECK(s.statistic ==
          doctest::Approx(base.statistic).epsilon(1e-10));
}

TEST_CASE("LRT: p > n - 1 is always degenerate") {
    const LrtResult r = lrt_statistic(random_real(30, 40, 2));
    CHECK(r.degenerate);
    CHECK_FALSE(r.p_value.has_value());

    ModelSpec m = ModelSpec::parse("iid");
    m.n = 30;
    m.p = 40;
    const LrtHarnessResult h = lrt_size_power(m, 50, 0.05, 7);
    CHECK(h.degenerate_fraction == doctest::Approx(1.0));
    CHECK(h.rejection_fraction == doctest::Approx(1.0));
}

TEST_CASE("LRT: duplicated column forces a pivot collapse") {
    DataMatrix x = random_real(40, 3, 4);
    Eigen::MatrixXd m(40, 4);
    m << x.re, x.re.col(0);
    const LrtResult r = lrt_statistic(DataMatrix::real(std::move(m)));
    CHECK(r.degenerate);
}

TEST_CASE("LRT: moderate degenerate regime splits the tallies") {
    ModelSpec m = ModelSpec::parse("iid");
    m.n = 5;
    m.p = 30;
    const LrtHarnessResult h = lrt_size_power(m, 40, 0.05, 9);
    CHECK(h.degenerate_fraction == doctest::Approx(1.0));
    CHECK(h.size_excluding_degenerate == doctest::Approx(0.0));
}

TEST_CASE("LRT: size at a comfortable aspect ratio") {
    ModelSpec m = ModelSpec::parse("iid");
    m.n = 100;
    m.p = 5;
    const LrtHarnessResult h = lrt_size_power(m, 400, 0.05, 12);
    CHECK(h.degenerate_fraction == doctest::Approx(0.0));
    CHECK(h.rejection_fraction >= 0.02);
    CHECK(h.rejection_fraction <= 0.10);
}

TEST_CASE("LRT: compound-symmetric power at a moderate operating point") {
    ModelSpec m = ModelSpec::parse("cs");
    m.n = 100;
    m.p = 20;
    const LrtHarnessResult h = lrt_size_power(m, 1000, 0.05, 13);
    CHECK(h.degenerate_fraction == doctest::Approx(0.0));
    CHECK(h.rejection_fraction == doctest::Approx(0.411).epsilon(0.2));
}
