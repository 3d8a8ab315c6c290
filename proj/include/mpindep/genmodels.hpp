#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mpindep/eigcore.hpp"

namespace mpindep {

// Innovation laws, standardized to mean 0 / variance 1 unless noted.
enum class Innovation {
    normal,
    std_gamma_4_2,    // (Gamma(shape 4, rate 2) - 2), mean 0, variance 1
    normal_mu1,       // Normal(1, 1): the SMA power-study innovations
    squared_normal,   // (Z^2 - 1)/sqrt(2): standardized chi-square(1)
    nma_marginal,     // Z1 Z2 (Z2 + Z3 + 1)/sqrt(5): standardized marginal of
                      // the nonlinear MA model
    complex_phase,    // (1/sqrt(n)) e^{-i theta}, theta ~ U[0, 2pi)
};

enum class ModelKind {
    iid,
    compound_symmetric,
    ma1,
    ar1,
    sma,
    sar,
    sec,
    panel,
    nonlinear_ma,
    arch1,
    vandermonde,
};

struct USpec {
    enum class Mode { null_iid_normal_mu1_sigma1, alt_factor, zero };
    Mode mode = Mode::null_iid_normal_mu1_sigma1;
};

struct ModelSpec {
    ModelKind kind = ModelKind::iid;
    Innovation innovation = Innovation::normal;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double psi = 0.5;     // ma1
    double phi = 0.5;     // ar1
    double alpha0 = 0.9;  // arch1
    double alpha1 = 0.1;  // arch1
    bool square_series = true;  // arch1: emit the squared series
    // Rescale generate() output to population mean 0 / variance 1 per column
    // (MA1, AR1, SMA, SEC, nonlinear MA, ARCH). The null reference is the
    // M-P law of unit-variance data, so the test pipeline standardizes by
    // the model's known moments; raw gen_* outputs are unaffected.
    bool standardize = true;
    USpec u_spec;               // panel
    // Spatial weight matrix; empty means the default study weights
    // (i.i.d. U(0,1)/sqrt(p), fresh per seed).
    std::optional<Eigen::MatrixXd> weights;

    static ModelSpec parse(const std::string& name);
    std::string name() const;
};

// Generators. All are pure functions of (parameters, seed); innovation
// column t draws from substream(seed, column, t), so degenerate parameters
// collapse bit-exactly onto gen_iid.
DataMatrix gen_iid(Eigen::Index n, Eigen::Index p, Innovation innov,
                   std::uint64_t seed);
DataMatrix gen_compound_symmetric(Eigen::Index n, Eigen::Index p,
                                  Innovation innov, std::uint64_t seed);
DataMatrix gen_ma1(Eigen::Index n, Eigen::Index p, double psi,
                   std::uint64_t seed, Innovation innov = Innovation::normal);
DataMatrix gen_ar1(Eigen::Index n, Eigen::Index p, double phi,
                   std::uint64_t seed, Innovation innov = Innovation::normal);
DataMatrix gen_sma(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   Innovation innov, std::uint64_t seed);
DataMatrix gen_sar(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   Innovation innov, std::uint64_t seed);
DataMatrix gen_sec(Eigen::Index n, Eigen::Index p, const Eigen::MatrixXd& w,
                   std::uint64_t seed, Innovation innov = Innovation::normal);
DataMatrix gen_panel(Eigen::Index n, Eigen::Index p, const USpec& u_spec,
                     std::uint64_t seed);
// The factor values the panel generator would use for this seed.
Eigen::VectorXd panel_u(Eigen::Index p, const USpec& u_spec,
                        std::uint64_t seed);
DataMatrix gen_nonlinear_ma(Eigen::Index n, Eigen::Index p, std::uint64_t seed,
                            Innovation innov = Innovation::normal);
DataMatrix gen_arch1(Eigen::Index n, Eigen::Index p, double alpha0,
                     double alpha1, bool square_series, std::uint64_t seed,
                     Innovation innov = Innovation::normal);
DataMatrix gen_vandermonde(Eigen::Index n, Eigen::Index p, std::uint64_t seed);

// Default spatial study weights: omega_ik i.i.d. U(0,1)/sqrt(p).
Eigen::MatrixXd default_spatial_weights(Eigen::Index p, std::uint64_t seed);

// One matrix from the model, under the shared substream convention. When
// model.standardize is set the emitted columns are rescaled to population
// mean 0 / variance 1 using the model's analytic moments.
DataMatrix generate(const ModelSpec& model, std::uint64_t seed);

// The null used to calibrate a model's test: an i.i.d. matrix of the
// model's standardized innovation law (complex phases for the Vandermonde
// family); the panel null is the panel model with independent u_i.
ModelSpec null_counterpart(const ModelSpec& model);

// Sample value of the cross-product diagnostic
// (1/p^2) sum_{i != j} (u_i^2 - ubar)(u_j^2 - ubar); tends to 0 when the
// u_i are independent.
double panel_u_diagnostic(const Eigen::VectorXd& u, double ubar);

const char* to_string(Innovation innov);
const char* to_string(ModelKind kind);
Innovation innovation_from_string(const std::string& name);

}  // namespace mpindep
