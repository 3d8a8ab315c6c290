#pragma once

#include <cstdint>
#include <vector>

#include "mpindep/cf_test.hpp"
#include "mpindep/genmodels.hpp"
#include "mpindep/rng.hpp"

namespace mpindep {

// Sorted Monte-Carlo sample of p^2 M_n under H0, with the order-statistic
// critical pair: the (K alpha/2)-th smallest and (K alpha/2)-th largest
// realizations (K = 1000, alpha = 0.05 gives the 25th and 976th smallest).
struct NullCalibration {
    std::vector<double> sorted_stats;
    double lower_q = 0.0;
    double upper_q = 0.0;
    double alpha = 0.05;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    std::uint64_t weight_fingerprint = 0;
};

struct HarnessCell {
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double estimate = 0.0;          // empirical size or power
    int reps = 0;
    double degenerate_fraction = 0.0;  // LRT only
    double panel_diagnostic = 0.0;     // panel model only
};

struct HarnessReport {
    std::vector<HarnessCell> cells;
    std::uint64_t base_seed = 0;
};

// Order-statistic critical pair from an already sorted null sample.
std::pair<double, double> order_statistic_quantiles(
    const std::vector<double>& sorted_stats, double alpha);

// Scaled statistic p^2 M_n for one data matrix. Complex matrices (the
// Vandermonde family) already carry the 1/sqrt(n) factor, so their Gram
// matrix X^H X is consumed directly; real matrices go through (1/n) X^T X.
double scaled_statistic(const DataMatrix& x, const MnContext& ctx);

// Monte-Carlo null calibration from K independent datasets drawn from
// null_model, one substream per replicate.
NullCalibration calibrate_model(const ModelSpec& null_model, int reps,
                                double alpha, std::uint64_t seed,
                                const WeightMeasure& weights, int threads = 1);

// i.i.d. innovation convenience wrapper.
NullCalibration simulate_null(Eigen::Index n, Eigen::Index p, Innovation innov,
                              int reps, double alpha, std::uint64_t seed,
                              const WeightMeasure& weights, int threads = 1);

// Rejection fraction over eval_reps null datasets, calibrated from an
// independent seed stream.
double empirical_size(Eigen::Index n, Eigen::Index p, Innovation innov,
                      int cal_reps, int eval_reps, double alpha,
                      std::uint64_t seed, const WeightMeasure& weights,
                      int threads = 1);

struct PowerResult {
    double power = 0.0;
    double panel_diagnostic = 0.0;  // mean of the (u_i^2) cross-product
                                    // diagnostic; panel model only
};

// Rejection fraction under the alternative, using critical points
// calibrated from the model's null counterpart.
PowerResult empirical_power(const ModelSpec& model, int cal_reps,
                            int eval_reps, double alpha, std::uint64_t seed,
                            const WeightMeasure& weights, int threads = 1);

// Replicate statistics for a model, in replicate-index order regardless of
// the worker count.
std::vector<double> replicate_statistics(const ModelSpec& model, int reps,
                                         std::uint64_t seed, StreamRole role,
                                         const WeightMeasure& weights,
                                         int threads = 1);

}  // namespace mpindep
