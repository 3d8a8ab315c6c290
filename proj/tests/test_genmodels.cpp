#include <doctest.h>

#include <cmath>
#include <complex>

#include "mpindep/genmodels.hpp"
#include "mpindep/rng.hpp"

using namespace mpindep;

namespace {

double column_mean(const Eigen::MatrixXd& x) { return x.mean(); }

double entry_variance(const Eigen::MatrixXd& x) {
    const double mu = x.mean();
    return (x.array() - mu).square().sum() / double(x.size() - 1);
}

double central_moment4(const Eigen::MatrixXd& x) {
    const double mu = x.mean();
    return (x.array() - mu).pow(4).sum() / double(x.size());
}

// Mean covariance between adjacent columns, using the known column means.
double lag1_cov(const Eigen::MatrixXd& x, double mu) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j + 1 < x.cols(); ++j)
        acc += ((x.col(j).array() - mu) * (x.col(j + 1).array() - mu)).mean();
    return acc / double(x.cols() - 1);
}

}  // namespace

TEST_CASE("innovation moments: gamma and normal") {
    const DataMatrix g =
        gen_iid(500000, 1, Innovation::std_gamma_4_2, 404);
    CHECK(std::abs(column_mean(g.re)) <= 0.005);
    CHECK(entry_variance(g.re) == doctest::Approx(1.0).epsilon(0.02));
    // Gamma(4, 2) has excess kurtosis 6/4, so the 4th central moment is 4.5.
    CHECK(central_moment4(g.re) == doctest::Approx(4.5).epsilon(0.05));

    const DataMatrix z = gen_iid(500000, 1, Innovation::normal, 404);
    CHECK(std::abs(column_mean(z.re)) <= 0.005);
    CHECK(entry_variance(z.re) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(central_moment4(z.re) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("innovation moments: standardized chi-square and NMA marginal") {
    const DataMatrix q =
        gen_iid(500000, 1, Innovation::squared_normal, 808);
    CHECK(std::abs(column_mean(q.re)) <= 0.01);
    CHECK(entry_variance(q.re) == doctest::Approx(1.0).epsilon(0.03));

    const DataMatrix m = gen_iid(500000, 1, Innovation::nma_marginal, 808);
    CHECK(std::abs(column_mean(m.re)) <= 0.01);
    CHECK(entry_variance(m.re) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("compound symmetric: Sigma = 0.95 I + 0.05 J") {
    const Eigen::Index n = 100000, p = 4;
    const DataMatrix x = gen_compound_symmetric(n, p, Innovation::normal, 9);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double var = x.re.col(j).squaredNorm() / double(n);
        CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    }
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index k = j + 1; k < p; ++k) {
            const double cov = x.re.col(j).dot(x.re.col(k)) / double(n);
            CHECK(std::abs(cov - 0.05) <= 0.01);
        }
}

TEST_CASE("MA(1): degenerate collapse and raw moments") {
    const DataMatrix flat = gen_ma1(40, 8, 0.0, 77);
    const DataMatrix iid = gen_iid(40, 8, Innovation::normal, 77);
    CHECK(flat.re == iid.re);  // bit-exact via the shared column salts

    const double psi = 0.5;
    const DataMatrix x = gen_ma1(100000, 6, psi, 21);
    CHECK(entry_variance(x.re) == doctest::Approx(1.0 + psi * psi).epsilon(0.05));
    CHECK(std::abs(lag1_cov(x.re, 0.0) - psi) <= 0.02);

    CHECK_THROWS_AS(gen_ma1(10, 5, 1.0, 0), BadCoefficient);
}

TEST_CASE("AR(1): degenerate collapse, stationarity, and lag correlation") {
    const DataMatrix flat = gen_ar1(40, 8, 0.0, 78);
    const DataMatrix iid = gen_iid(40, 8, Innovation::normal, 78);
    CHECK(flat.re == iid.re);

    const double phi = 0.5;
    const DataMatrix x = gen_ar1(100000, 6, phi, 22);
    const double var = 1.0 / (1.0 - phi * phi);
    // Stationary start: every column shares the marginal variance.
    for (Eigen::Index j = 0; j < x.re.cols(); ++j)
        CHECK(x.re.col(j).squaredNorm() / 100000.0 ==
              doctest::Approx(var).epsilon(0.05));
    CHECK(std::abs(lag1_cov(x.re, 0.0) / var - phi) <= 0.02);

    CHECK_THROWS_AS(gen_ar1(10, 5, -1.0, 0), BadCoefficient);
}

TEST_CASE("SMA: zero weights collapse, identity weights double the series") {
    const Eigen::Index p = 6;
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(p, p);
    const DataMatrix flat = gen_sma(30, p, zero, Innovation::normal, 5);
    const DataMatrix iid = gen_iid(30, p, Innovation::normal, 5);
    CHECK(flat.re == iid.re);

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);
    const DataMatrix twice = gen_sma(30, p, id, Innovation::normal, 5);
    CHECK((twice.re - 2.0 * iid.re).norm() <= 1e-12);

    CHECK_THROWS_AS(gen_sma(10, 4, Eigen::MatrixXd::Zero(3, 3),
                            Innovation::normal, 0),
                    DimensionMismatch);
}

TEST_CASE("SAR: closed forms and covariance propagation") {
    const Eigen::Index p = 5;
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(p, p);
    const DataMatrix neg = gen_sar(30, p, zero, Innovation::normal, 6);
    const DataMatrix iid = gen_iid(30, p, Innovation::normal, 6);
    CHECK((neg.re + iid.re).norm() <= 1e-12);  // (0 - I)^{-1} = -I

    const DataMatrix same =
        gen_sar(30, p, 2.0 * Eigen::MatrixXd::Identity(p, p),
                Innovation::normal, 6);
    CHECK((same.re - iid.re).norm() <= 1e-10);

    // Cov(v) = (w - I)^{-1} (w' - I)^{-1} for unit-variance innovations.
    const Eigen::MatrixXd w = default_spatial_weights(p, 42);
    const Eigen::Index n = 200000;
    const DataMatrix x = gen_sar(n, p, w, Innovation::normal, 314);
    const Eigen::MatrixXd inv =
        (w - Eigen::MatrixXd::Identity(p, p)).inverse();
    const Eigen::MatrixXd cov_pop = inv * inv.transpose();
    const Eigen::MatrixXd cov_hat = x.re.transpose() * x.re / double(n);
    CHECK((cov_hat - cov_pop).norm() <= 0.05 * cov_pop.norm());

    CHECK_THROWS_AS(gen_sar(10, p, Eigen::MatrixXd::Identity(p, p),
                            Innovation::normal, 0),
                    SingularWeights);
}

TEST_CASE("SEC: zero weights collapse and second-stream covariance") {
    const Eigen::Index p = 4;
    const DataMatrix flat =
        gen_sec(30, p, Eigen::MatrixXd::Zero(p, p), 8);
    const DataMatrix iid = gen_iid(30, p, Innovation::normal, 8);
    CHECK(flat.re == iid.re);

    const Eigen::Index n = 100000;
    const DataMatrix two =
        gen_sec(n, p, Eigen::MatrixXd::Identity(p, p), 91);
    CHECK(entry_variance(two.re) == doctest::Approx(2.0).epsilon(0.05));

    // w = 1 1' / p: v_i = eps_i + (1/p) sum_k xi_k, cross-covariance 1/p.
    const Eigen::MatrixXd ones =
        Eigen::MatrixXd::Ones(p, p) / double(p);
    const DataMatrix x = gen_sec(n, p, ones, 92);
    const double cov = x.re.col(0).dot(x.re.col(2)) / double(n);
    CHECK(std::abs(cov - 1.0 / double(p)) <= 0.02);
}

TEST_CASE("panel: zero factor collapses onto the i.i.d. normal matrix") {
    USpec zero;
    zero.mode = USpec::Mode::zero;
    const DataMatrix flat = gen_panel(25, 7, zero, 13);
    const DataMatrix iid = gen_iid(25, 7, Innovation::normal, 13);
    CHECK(flat.re == iid.re);
}

TEST_CASE("panel: null factor moments and cross-product diagnostic") {
    USpec null_mode;  // u_i i.i.d. N(1, 1)
    const Eigen::Index p = 400;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const Eigen::VectorXd u = panel_u(p, null_mode, seed);
        CHECK(std::abs(u.mean() - 1.0) <= 0.2);
        // E u^2 = 2; the diagnostic centers at ubar = 2 and tends to 0.
        CHECK(std::abs(panel_u_diagnostic(u, 2.0)) <= 0.1);
    }
    // Mean squared entry of the null panel: 1 + E u^2 / p.
    const DataMatrix x = gen_panel(2000, p, null_mode, 17);
    const double ms = x.re.squaredNorm() / double(x.re.size());
    CHECK(ms == doctest::Approx(1.0 + 2.0 / double(p)).epsilon(0.02));
}

TEST_CASE("panel: factor alternative inflates the diagnostic") {
    USpec alt;
    alt.mode = USpec::Mode::alt_factor;
    const Eigen::Index p = 100;
    // u = 1 + T g with T i.i.d. U(0, 1): u_i are strongly dependent, so the
    // cross-product diagnostic concentrates away from 0.
    int big = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::VectorXd u = panel_u(p, alt, seed);
        if (std::abs(panel_u_diagnostic(u, 2.0)) > 1.0) ++big;
    }
    CHECK(big >= 8);
}

TEST_CASE("nonlinear MA: centered, uncorrelated, variance five") {
    const Eigen::Index n = 100000, p = 5;
    const DataMatrix x = gen_nonlinear_ma(n, p, 23);
    CHECK(std::abs(column_mean(x.re)) <= 0.05);
    CHECK(entry_variance(x.re) == doctest::Approx(5.0).epsilon(0.05));
    // White but dependent: adjacent columns are uncorrelated.
    CHECK(std::abs(lag1_cov(x.re, 0.0)) / 5.0 <= 0.03);
}

TEST_CASE("ARCH(1): degenerate collapse and stationary moments") {
    const DataMatrix flat = gen_arch1(40, 8, 0.9, 0.0, false, 31);
    const DataMatrix iid = gen_iid(40, 8, Innovation::normal, 31);
    CHECK((flat.re - std::sqrt(0.9) * iid.re).norm() <= 1e-12);

    const double a0 = 0.9, a1 = 0.1;
    const DataMatrix raw = gen_arch1(4000, 250, a0, a1, false, 33);
    CHECK(entry_variance(raw.re) ==
          doctest::Approx(a0 / (1.0 - a1)).epsilon(0.05));
    // The raw series is white...
    CHECK(std::abs(lag1_cov(raw.re, 0.0)) <= 0.02);
    // ...but its square has lag-1 autocorrelation alpha1.
    const DataMatrix sq = gen_arch1(4000, 250, a0, a1, true, 33);
    const double m2 = a0 / (1.0 - a1);
    const double m4 =
        3.0 * (a0 * a0 + 2.0 * a0 * a1 * m2) / (1.0 - 3.0 * a1 * a1);
    const double rho = lag1_cov(sq.re, m2) / (m4 - m2 * m2);
    CHECK(rho == doctest::Approx(a1).epsilon(0.35));
    CHECK(rho >= 0.05);

    CHECK_THROWS_AS(gen_arch1(10, 5, 0.0, 0.1, true, 0), BadCoefficient);
    CHECK_THROWS_AS(gen_arch1(10, 5, 0.9, 1.0, true, 0), BadCoefficient);
}

TEST_CASE("Vandermonde: unit columns, unit-modulus entries, trace p") {
    const Eigen::Index n = 40, p = 16;
    const DataMatrix v = gen_vandermonde(n, p, 3);
    REQUIRE(v.field == Field::complex);
    const double scale = 1.0 / std::sqrt(double(n));
    for (Eigen::Index j = 0; j < p; ++j) {
        CHECK(v.cx.col(j).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
        for (Eigen::Index k = 0; k < n; ++k)
            CHECK(std::abs(v.cx(k, j)) == doctest::Approx(scale).epsilon(1e-12));
        CHECK(v.cx(0, j) == std::complex<double>(scale, 0.0));  // omega^0
    }
}

TEST_CASE("default_spatial_weights: range and determinism") {
    const Eigen::Index p = 12;
    const Eigen::MatrixXd w = default_spatial_weights(p, 55);
    const double cap = 1.0 / std::sqrt(double(p));
    CHECK(w.minCoeff() >= 0.0);
    CHECK(w.maxCoeff() <= cap);
    CHECK(w == default_spatial_weights(p, 55));
    CHECK(w != default_spatial_weights(p, 56));
}

TEST_CASE("generate(): purity and standardized population moments") {
    for (const char* name : {"iid", "cs", "ma1", "ar1", "sma", "sar", "sec",
                             "panel", "panel_null", "nma", "arch1"}) {
        ModelSpec m = ModelSpec::parse(name);
        m.n = 30;
        m.p = 10;
        const DataMatrix a = generate(m, 1234);
        const DataMatrix b = generate(m, 1234);
        CHECK(a.re == b.re);
    }
    // Standardized output has population variance 1 per column.
    for (const char* name : {"ma1", "ar1", "sma", "nma", "arch1"}) {
        ModelSpec m = ModelSpec::parse(name);
        m.n = 3000;
        m.p = 40;
        const DataMatrix x = generate(m, 77);
        for (Eigen::Index j = 0; j < m.p; ++j) {
            const double mu = x.re.col(j).mean();
            const double var =
                (x.re.col(j).array() - mu).square().mean();
            CHECK(var == doctest::Approx(1.0).epsilon(0.25));
            CHECK(std::abs(mu) <= 0.15);
        }
    }
    // standardize = false leaves the raw generator output untouched.
    ModelSpec raw = ModelSpec::parse("ma1");
    raw.n = 30;
    raw.p = 10;
    raw.standardize = false;
    const DataMatrix r = generate(raw, 5);
    const DataMatrix direct = gen_ma1(30, 10, raw.psi, 5);
    CHECK(r.re == direct.re);
}

TEST_CASE("null_counterpart mapping") {
    auto null_of = [](const char* name) {
        ModelSpec m = ModelSpec::parse(name);
        m.n = 10;
        m.p = 4;
        return null_counterpart(m);
    };
    CHECK(null_of("cs").kind == ModelKind::iid);
    CHECK(null_of("cs").innovation == Innovation::normal);
    {
        ModelSpec g = ModelSpec::parse("cs");
        g.innovation = Innovation::std_gamma_4_2;
        CHECK(null_counterpart(g).innovation == Innovation::std_gamma_4_2);
    }
    CHECK(null_of("sma").kind == ModelKind::iid);
    CHECK(null_of("sma").innovation == Innovation::normal);
    CHECK(null_of("nma").innovation == Innovation::normal);
    CHECK(null_of("arch1").innovation == Innovation::normal);
    const ModelSpec pn = null_of("panel");
    CHECK(pn.kind == ModelKind::panel);
    CHECK(pn.u_spec.mode == USpec::Mode::null_iid_normal_mu1_sigma1);
    CHECK(null_of("vdm").innovation == Innovation::complex_phase);
}
