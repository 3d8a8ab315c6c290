#pragma once

#include <optional>

#include "mpindep/calibrate.hpp"

namespace mpindep {

// Anderson's likelihood-ratio independence test with m = 1 (scalar blocks):
// statistic = sum_{k=2..p} -(n - 3/2 - k/2) log L_k, where
// L_k = det(Q_{1..k}) / (det(Q_{1..k-1}) Q_kk) from the leading principal
// minors of the centered sample covariance Q. Asymptotically chi-square with
// p(p-1)/2 degrees of freedom.
struct LrtResult {
    double statistic = 0.0;
    Eigen::Index dof = 0;
    std::optional<double> p_value;  // absent when degenerate
    bool degenerate = false;        // singular Q (pivot collapse, p > n-1)
};

LrtResult lrt_statistic(const DataMatrix& x);

struct LrtHarnessResult {
    double rejection_fraction = 0.0;     // degenerate counts as rejection
    double degenerate_fraction = 0.0;
    double size_excluding_degenerate = 0.0;  // rejections among the rest
};

// Rejection fraction at nominal alpha over K replicates of the model.
LrtHarnessResult lrt_size_power(const ModelSpec& model, int reps, double alpha,
                                std::uint64_t seed);

}  // namespace mpindep
