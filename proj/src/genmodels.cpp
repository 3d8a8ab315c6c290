#include "mpindep/genmodels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mpindep/rng.hpp"

namespace mpindep {

namespace {

void check_dims(Eigen::Index n, Eigen::Index p) {
    if (n < 1 || p < 1) throw DimensionMismatch("generator needs n >= 1, p >= 1");
}

// One innovation column. Column t of every real generator draws from
// substream(seed, column, salt); generators keep their salt spaces aligned
// so degenerate parameters collapse bit-exactly onto gen_iid.
Eigen::VectorXd draw_column(Eigen::Index n, Innovation innov,
                            std::uint64_t seed, std::uint64_t salt) {
    auto eng = make_engine(substream(seed, StreamRole::column, salt));
    Eigen::VectorXd v(n);
    switch (innov) {
        case Innovation::normal: {
            std::normal_distribution<double> d(0.0, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = d(eng);
            break;
        }
        case Innovation::std_gamma_4_2: {
            // Gamma(shape 4, rate 2): mean 2, variance 1.
            std::gamma_distribution<double> d(4.0, 0.5);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = d(eng) - 2.0;
            break;
        }
        case Innovation::normal_mu1: {
            std::normal_distribution<double> d(1.0, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = d(eng);
            break;
        }
        case Innovation::squared_normal: {
            // Chi-square(1) standardized: mean 1, variance 2.
            std::normal_distribution<double> d(0.0, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double z = d(eng);
                v[i] = (z * z - 1.0) / std::numbers::sqrt2;
            }
            break;
        }
        case Innovation::nma_marginal: {
            // Var(Z1 Z2 (Z2 + Z3 + 1)) = 5 for independent standard normals.
            std::normal_distribution<double> d(0.0, 1.0);
            const double scale = 1.0 / std::sqrt(5.0);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double z1 = d(eng), z2 = d(eng), z3 = d(eng);
                v[i] = scale * z1 * z2 * (z2 + z3 + 1.0);
            }
            break;
        }
        case Innovation::complex_phase:
            throw UsageError("complex_phase has no real column form");
    }
    return v;
}

Eigen::MatrixXd draw_matrix(Eigen::Index n, Eigen::Index p, Innovation innov,
                            std::uint64_t seed,
                            std::uint64_t first_salt = 1) {
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        x.col(j) = draw_column(n, innov, seed, first_salt + static_cast<std::uint64_t>(j));
    return x;
}

}  // namespace

DataMatrix gen_iid(Eigen::Index n, Eigen::Index p, Innovation innov,
                   std::uint64_t seed) {
    check_dims(n, p);
    if (innov == Innovation::complex_phase) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        Eigen::MatrixXcd x(n, p);
        for (Eigen::Index j = 0; j < p; ++j) {
            auto eng = make_engine(
                substream(seed, StreamRole::column, 1 + static_cast<std::uint64_t>(j)));
            std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
            for (Eigen::Index k = 0; k < n; ++k) {
                const double th = u(eng);
                x(k, j) = scale * std::complex<double>(std::cos(th), -std::sin(th));
            }
        }
        return DataMatrix::complex(std::move(x));
    }
    return DataMatrix::real(draw_matrix(n, p, innov, seed));
}

DataMatrix gen_compound_symmetric(Eigen::Index n, Eigen::Index p,
                                  Innovation innov, std::uint64_t seed) {
    check_dims(n, p);
    // y_j = T^{1/2} w_j with the p x (p+1) block (sqrt(0.95) I, sqrt(0.05) 1),
    // so Sigma = 0.95 I + 0.05 * 1 1'.
    const Eigen::MatrixXd w = draw_matrix(n, p + 1, innov, seed);
    Eigen::MatrixXd y = std::sqrt(0.95) * w.leftCols(p);
    y.colwise() += std::sqrt(0.05) * w.col(p);
    return DataMatrix::real(std::move(y));
}

DataMatrix gen_ma1(Eigen::Index n, Eigen::Index p, double psi,
                   std::uint64_t seed, Innovation innov) {
    check_dims(n, p);
    if (!(std::abs(psi) < 1.0)) throw BadCoefficient("MA(1) needs |psi| < 1");
    // Innovations z_0..z_p on salts 0..p; v_t = z_t + psi z_{t-1}.
    Eigen::MatrixXd v(n, p);
    Eigen::VectorXd prev = draw_column(n, innov, seed, 0);
    for (Eigen::Index t = 1; t <= p; ++t) {
        Eigen::VectorXd cur =
            draw_column(n, innov, seed, static_cast<std::uint64_t>(t));
        if (psi == 0.0)
            v.col(t - 1) = cur;
        else
            v.col(t - 1) = cur + psi * prev;
        prev = std::move(cur);
    }
    return DataMatrix::real(std::move(v));
}

DataMatrix gen_ar1(Eigen::Index n, Eigen::Index p, double phi,
                   std::uint64_t seed, Innovation innov) {
    check_dims(n, p);
    if (!(std::abs(phi) < 1.0)) throw BadCoefficient("AR(1) needs |phi| < 1");
    Eigen::MatrixXd v(n, p);
    // Stationary start: v_0 = z_0 / sqrt(1 - phi^2), so Var(v_t) = 1/(1-phi^2)
    // for every t.
    Eigen::VectorXd state =
        draw_column(n, innov, seed, 0) / std::sqrt(1.0 - phi * phi);
    for (Eigen::Index t = 1; t <= p; ++t) {
        Eigen::VectorXd z =
            draw_column(n, innov, seed, static_cast<std::uint64_t>(t));
        if (phi == 0.0)
            state = std::move(z);
        else
            state = phi * state + z;
        v.col(t - 1) = state;
    }
    return DataMatrix::real(std::move(v));
}

DataMatrix gen_sma(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   Innovation innov, std::uint64_t seed) {
    check_dims(n, p);
    if (w.rows() != p || w.cols() != p)
        throw DimensionMismatch("SMA weight matrix must be p x p");
    const Eigen::MatrixXd eps = draw_matrix(n, p, innov, seed);
    if (w.isZero(0.0)) return DataMatrix::real(eps);
    Eigen::MatrixXd v = eps * (w.transpose() + Eigen::MatrixXd::Identity(p, p));
    return DataMatrix::real(std::move(v));
}

DataMatrix gen_sar(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   Innovation innov, std::uint64_t seed) {
    check_dims(n, p);
    if (w.rows() != p || w.cols() != p)
        throw DimensionMismatch("SAR weight matrix must be p x p");
    const Eigen::MatrixXd eps = draw_matrix(n, p, innov, seed);
    // v_j' = eps_j' (w' - I)^{-1}  <=>  (w - I) v' = eps'.
    const Eigen::MatrixXd lhs = w - Eigen::MatrixXd::Identity(p, p);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    Eigen::MatrixXd vt = lu.solve(eps.transpose());
    const double resid = (lhs * vt - eps.transpose()).norm();
    // NaN-safe: a singular solve can yield NaN residuals, not just large ones.
    if (!(resid <= 1e-8 * std::max(1.0, eps.norm())))
        throw SingularWeights("SAR: omega - I is numerically singular");
    return DataMatrix::real(vt.transpose());
}

DataMatrix gen_sec(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   std::uint64_t seed, Innovation innov) {
    check_dims(n, p);
    if (w.rows() != p || w.cols() != p)
        throw DimensionMismatch("SEC weight matrix must be p x p");
    const Eigen::MatrixXd eps = draw_matrix(n, p, innov, seed);
    if (w.isZero(0.0)) return DataMatrix::real(eps);
    const std::uint64_t xi_seed =
        substream(seed, StreamRole::second_innovation, 0);
    const Eigen::MatrixXd xi = draw_matrix(n, p, innov, xi_seed);
    Eigen::MatrixXd v = xi * w.transpose() + eps;
    return DataMatrix::real(std::move(v));
}

Eigen::VectorXd panel_u(Eigen::Index p, const USpec& u_spec,
                        std::uint64_t seed) {
    if (u_spec.mode == USpec::Mode::zero) return Eigen::VectorXd::Zero(p);
    auto eng = make_engine(substream(seed, StreamRole::factor, 0));
    Eigen::VectorXd u(p);
    if (u_spec.mode == USpec::Mode::null_iid_normal_mu1_sigma1) {
        std::normal_distribution<double> d(1.0, 1.0);
        for (Eigen::Index i = 0; i < p; ++i) u[i] = d(eng);
    } else {
        // (u_1..u_p) ~ N(1_p, T T') with T entries i.i.d. U(0,1).
        std::uniform_real_distribution<double> du(0.0, 1.0);
        Eigen::MatrixXd t(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index k = 0; k < p; ++k) t(i, k) = du(eng);
        std::normal_distribution<double> dn(0.0, 1.0);
        Eigen::VectorXd g(p);
        for (Eigen::Index i = 0; i < p; ++i) g[i] = dn(eng);
        u = Eigen::VectorXd::Ones(p) + t * g;
    }
    return u;
}

DataMatrix gen_panel(Eigen::Index n, Eigen::Index p, const USpec& u_spec,
                     std::uint64_t seed) {
    check_dims(n, p);
    Eigen::MatrixXd v = draw_matrix(n, p, Innovation::normal, seed);
    if (u_spec.mode == USpec::Mode::zero) return DataMatrix::real(std::move(v));
    const Eigen::VectorXd u = panel_u(p, u_spec, seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    for (Eigen::Index i = 0; i < p; ++i) v.col(i).array() += scale * u[i];
    return DataMatrix::real(std::move(v));
}

DataMatrix gen_nonlinear_ma(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
                            Innovation innov) {
    check_dims(n, p);
    // R_t = Z_{t-1} Z_{t-2} (Z_{t-2} + Z_t + 1); needs pre-samples Z_{-1}, Z_0.
    // Salt t + 2 keeps the pre-sample indices nonnegative.
    Eigen::MatrixXd r(n, p);
    Eigen::VectorXd z_mm = draw_column(n, innov, seed, 1);  // Z_{t-2} at t = 1
    Eigen::VectorXd z_m = draw_column(n, innov, seed, 2);   // Z_{t-1} at t = 1
    for (Eigen::Index t = 1; t <= p; ++t) {
        Eigen::VectorXd z =
            draw_column(n, innov, seed, static_cast<std::uint64_t>(t) + 2);
        r.col(t - 1) =
            z_m.array() * z_mm.array() * (z_mm.array() + z.array() + 1.0);
        z_mm = std::move(z_m);
        z_m = std::move(z);
    }
    return DataMatrix::real(std::move(r));
}

DataMatrix gen_arch1(Eigen::Index n, Eigen::Index p, double alpha0,
                     double alpha1, bool square_series, std::uint64_t seed,
                     Innovation innov) {
    check_dims(n, p);
    if (!(alpha0 > 0.0)) throw BadCoefficient("ARCH(1) needs alpha0 > 0");
    if (!(alpha1 >= 0.0 && alpha1 < 1.0))
        throw BadCoefficient("ARCH(1) needs 0 <= alpha1 < 1");
    if (alpha1 == 0.0 && !square_series) {
        // No state dependence: sqrt(alpha0) * Z with the shared column streams.
        Eigen::MatrixXd x = draw_matrix(n, p, innov, seed);
        if (alpha0 != 1.0) x *= std::sqrt(alpha0);
        return DataMatrix::real(std::move(x));
    }
    const double stat_var = alpha0 / (1.0 - alpha1);
    constexpr int kBurnIn = 200;
    Eigen::MatrixXd w(n, p);
    for (Eigen::Index j = 0; j < n; ++j) {
        auto eng = make_engine(
            substream(seed, StreamRole::row, 1 + static_cast<std::uint64_t>(j)));
        std::normal_distribution<double> d(0.0, 1.0);
        double prev = std::sqrt(stat_var) * d(eng);
        for (int t = 0; t < kBurnIn; ++t)
            prev = d(eng) * std::sqrt(alpha0 + alpha1 * prev * prev);
        for (Eigen::Index t = 0; t < p; ++t) {
            prev = d(eng) * std::sqrt(alpha0 + alpha1 * prev * prev);
            w(j, t) = square_series ? prev * prev : prev;
        }
    }
    return DataMatrix::real(std::move(w));
}

DataMatrix gen_vandermonde(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    check_dims(n, p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXcd v(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        auto eng = make_engine(
            substream(seed, StreamRole::column, 1 + static_cast<std::uint64_t>(j)));
        std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
        const double omega = u(eng);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double phase = -static_cast<double>(k) * omega;
            v(k, j) = scale * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return DataMatrix::complex(std::move(v));
}

Eigen::MatrixXd default_spatial_weights(Eigen::Index p, std::uint64_t seed) {
    auto eng = make_engine(substream(seed, StreamRole::weights, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    Eigen::MatrixXd w(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index k = 0; k < p; ++k) w(i, k) = scale * u(eng);
    return w;
}

namespace {

// Population mean of one innovation draw; every law has unit variance.
double innovation_mean(Innovation innov) {
    return innov == Innovation::normal_mu1 ? 1.0 : 0.0;
}

// Rescale columns to population mean 0 / variance 1 with the model's
// analytic moments; w is the spatial weight matrix when one was used.
void standardize_columns(const ModelSpec& m, const Eigen::MatrixXd& w,
                         DataMatrix& x) {
    switch (m.kind) {
        case ModelKind::ma1: {
            const double sd = std::sqrt(1.0 + m.psi * m.psi);
            if (sd != 1.0) x.re /= sd;
            break;
        }
        case ModelKind::ar1: {
            const double sd = 1.0 / std::sqrt(1.0 - m.phi * m.phi);
            if (sd != 1.0) x.re /= sd;
            break;
        }
        case ModelKind::sma:
        case ModelKind::sec: {
            // Column i of SMA is eps_i + sum_k w_ik eps_k; SEC replaces the
            // weighted sum with the independent xi stream, so the variance
            // loses the 2 w_ii cross term.
            const double mu_e = innovation_mean(m.innovation);
            for (Eigen::Index i = 0; i < m.p; ++i) {
                const double row_sum = w.row(i).sum();
                const double row_sq = w.row(i).squaredNorm();
                const double cross =
                    m.kind == ModelKind::sma ? 2.0 * w(i, i) : 0.0;
                const double mean = mu_e * (1.0 + row_sum);
                const double sd = std::sqrt(1.0 + cross + row_sq);
                x.re.col(i).array() -= mean;
                if (sd != 1.0) x.re.col(i) /= sd;
            }
            break;
        }
        case ModelKind::nonlinear_ma:
            // Var(R_t) = 5 under standard normal innovations.
            if (m.innovation == Innovation::normal)
                x.re /= std::sqrt(5.0);
            break;
        case ModelKind::arch1: {
            const double m2 = m.alpha0 / (1.0 - m.alpha1);
            if (!m.square_series) {
                const double sd = std::sqrt(m2);
                if (sd != 1.0) x.re /= sd;
                break;
            }
            // E W^4 = 3 (a0^2 + 2 a0 a1 m2) / (1 - 3 a1^2), finite only when
            // 3 a1^2 < 1; the squared series is left raw otherwise.
            if (3.0 * m.alpha1 * m.alpha1 >= 1.0) break;
            const double m4 = 3.0 *
                              (m.alpha0 * m.alpha0 +
                               2.0 * m.alpha0 * m.alpha1 * m2) /
                              (1.0 - 3.0 * m.alpha1 * m.alpha1);
            x.re.array() -= m2;
            x.re /= std::sqrt(m4 - m2 * m2);
            break;
        }
        default:
            break;  // unit-variance by construction (iid, CS, panel, V^H V)
    }
}

}  // namespace

DataMatrix generate(const ModelSpec& m, std::uint64_t seed) {
    Eigen::MatrixXd w;
    auto spatial = [&](Eigen::Index p) -> const Eigen::MatrixXd& {
        w = m.weights ? *m.weights : default_spatial_weights(p, seed);
        return w;
    };
    DataMatrix x;
    switch (m.kind) {
        case ModelKind::iid:
            x = gen_iid(m.n, m.p, m.innovation, seed);
            break;
        case ModelKind::compound_symmetric:
            x = gen_compound_symmetric(m.n, m.p, m.innovation, seed);
            break;
        case ModelKind::ma1:
            x = gen_ma1(m.n, m.p, m.psi, seed, m.innovation);
            break;
        case ModelKind::ar1:
            x = gen_ar1(m.n, m.p, m.phi, seed, m.innovation);
            break;
        case ModelKind::sma:
            x = gen_sma(m.n, m.p, spatial(m.p), m.innovation, seed);
            break;
        case ModelKind::sar:
            x = gen_sar(m.n, m.p, spatial(m.p), m.innovation, seed);
            break;
        case ModelKind::sec:
            x = gen_sec(m.n, m.p, spatial(m.p), seed, m.innovation);
            break;
        case ModelKind::panel:
            x = gen_panel(m.n, m.p, m.u_spec, seed);
            break;
        case ModelKind::nonlinear_ma:
            x = gen_nonlinear_ma(m.n, m.p, seed, m.innovation);
            break;
        case ModelKind::arch1:
            x = gen_arch1(m.n, m.p, m.alpha0, m.alpha1, m.square_series,
                          seed, m.innovation);
            break;
        case ModelKind::vandermonde:
            x = gen_vandermonde(m.n, m.p, seed);
            break;
        default:
            throw UsageError("unknown model kind");
    }
    if (m.standardize) standardize_columns(m, w, x);
    return x;
}

ModelSpec null_counterpart(const ModelSpec& m) {
    ModelSpec out = m;
    out.kind = ModelKind::iid;
    out.weights.reset();
    switch (m.kind) {
        case ModelKind::iid:
        case ModelKind::compound_symmetric:
        case ModelKind::ma1:
        case ModelKind::ar1:
            out.innovation = m.innovation;
            break;
        case ModelKind::sma:
        case ModelKind::sar:
        case ModelKind::sec:
        case ModelKind::nonlinear_ma:
        case ModelKind::arch1:
            // Standardized columns are mean 0 / variance 1, so the null is
            // an i.i.d. standard normal matrix.
            out.innovation = Innovation::normal;
            break;
        case ModelKind::panel:
            // The panel null is the panel model itself with independent u_i.
            out.kind = ModelKind::panel;
            out.u_spec.mode = USpec::Mode::null_iid_normal_mu1_sigma1;
            break;
        case ModelKind::vandermonde:
            out.innovation = Innovation::complex_phase;
            break;
    }
    return out;
}

double panel_u_diagnostic(const Eigen::VectorXd& u, double ubar) {
    const Eigen::ArrayXd d = u.array().square() - ubar;
    const double total = d.sum();
    const double self = (d * d).sum();
    const double p2 = static_cast<double>(u.size()) * static_cast<double>(u.size());
    return (total * total - self) / p2;
}

const char* to_string(Innovation innov) {
    switch (innov) {
        case Innovation::normal: return "normal";
        case Innovation::std_gamma_4_2: return "gamma";
        case Innovation::normal_mu1: return "normal_mu1";
        case Innovation::squared_normal: return "squared_normal";
        case Innovation::nma_marginal: return "nma_marginal";
        case Innovation::complex_phase: return "complex_phase";
    }
    return "?";
}

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::iid: return "iid";
        case ModelKind::compound_symmetric: return "cs";
        case ModelKind::ma1: return "ma1";
        case ModelKind::ar1: return "ar1";
        case ModelKind::sma: return "sma";
        case ModelKind::sar: return "sar";
        case ModelKind::sec: return "sec";
        case ModelKind::panel: return "panel";
        case ModelKind::nonlinear_ma: return "nma";
        case ModelKind::arch1: return "arch1";
        case ModelKind::vandermonde: return "vdm";
    }
    return "?";
}

Innovation innovation_from_string(const std::string& name) {
    if (name == "normal") return Innovation::normal;
    if (name == "gamma") return Innovation::std_gamma_4_2;
    if (name == "normal_mu1") return Innovation::normal_mu1;
    if (name == "squared_normal") return Innovation::squared_normal;
    if (name == "nma_marginal") return Innovation::nma_marginal;
    if (name == "complex_phase") return Innovation::complex_phase;
    throw UsageError("unknown innovation: " + name);
}

ModelSpec ModelSpec::parse(const std::string& name) {
    ModelSpec m;
    if (name == "iid") m.kind = ModelKind::iid;
    else if (name == "cs") m.kind = ModelKind::compound_symmetric;
    else if (name == "ma1") m.kind = ModelKind::ma1;
    else if (name == "ar1") m.kind = ModelKind::ar1;
    else if (name == "sma") { m.kind = ModelKind::sma; m.innovation = Innovation::normal_mu1; }
    else if (name == "sar") m.kind = ModelKind::sar;
    else if (name == "sec") m.kind = ModelKind::sec;
    else if (name == "panel") { m.kind = ModelKind::panel; m.u_spec.mode = USpec::Mode::alt_factor; }
    else if (name == "panel_null") { m.kind = ModelKind::panel; m.u_spec.mode = USpec::Mode::null_iid_normal_mu1_sigma1; }
    else if (name == "nma") m.kind = ModelKind::nonlinear_ma;
    else if (name == "arch1") m.kind = ModelKind::arch1;
    else if (name == "vdm") m.kind = ModelKind::vandermonde;
    else throw UsageError("unknown model: " + name);
    return m;
}

std::string ModelSpec::name() const {
    if (kind == ModelKind::panel &&
        u_spec.mode == USpec::Mode::null_iid_normal_mu1_sigma1)
        return "panel_null";
    return to_string(kind);
}

}  // namespace mpindep
