#include "mpindep/lrt.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

namespace mpindep {

LrtResult lrt_statistic(const DataMatrix& x) {
    if (x.field != Field::real)
        throw UsageError("LRT is defined for real data only");
    const Eigen::Index n = x.n();
    const Eigen::Index p = x.p();
    if (n < 2) throw UsageError("LRT needs n >= 2");
    // Centered sample covariance, divisor n - 1.
    const Eigen::RowVectorXd mean = x.re.colwise().mean();
    const Eigen::MatrixXd centered = x.re.rowwise() - mean;
    Eigen::MatrixXd q = (centered.transpose() * centered) / double(n - 1);

    LrtResult res;
    res.dof = p * (p - 1) / 2;
    const double eps_pivot = 1e-12 * std::max(1e-300, q.diagonal().maxCoeff());

    // Incremental Cholesky: det(Q_{1..k}) = prod d_i^2, so
    // log L_k = 2 log d_k - log Q_kk.
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
    double stat = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
        for (Eigen::Index j = 0; j < k; ++j) {
            double s = q(k, j);
            for (Eigen::Index i = 0; i < j; ++i) s -= l(k, i) * l(j, i);
            l(k, j) = s / l(j, j);
        }
        double v = q(k, k);
        for (Eigen::Index i = 0; i < k; ++i) v -= l(k, i) * l(k, i);
        if (v <= eps_pivot) {
            res.degenerate = true;
            return res;
        }
        l(k, k) = std::sqrt(v);
        if (k >= 1) {
            const double log_lk = 2.0 * std::log(l(k, k)) - std::log(q(k, k));
            const double weight = double(n) - 1.5 - 0.5 * double(k + 1);
            stat += -weight * log_lk;
        }
    }
    res.statistic = stat;
    if (p >= 2) {
        boost::math::chi_squared dist(static_cast<double>(res.dof));
        res.p_value = boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
    } else {
        res.p_value = 1.0;
    }
    return res;
}

LrtHarnessResult lrt_size_power(const ModelSpec& model, int reps, double alpha,
                                std::uint64_t seed) {
    LrtHarnessResult out;
    int rejected = 0, degenerate = 0, rejected_nondeg = 0;
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t rs =
            substream(seed, StreamRole::evaluation, static_cast<std::uint64_t>(r));
        const LrtResult res = lrt_statistic(generate(model, rs));
        if (res.degenerate) {
            // A singular Q has likelihood-ratio 0; count as rejection, and
            // report the degenerate fraction alongside.
            ++degenerate;
            ++rejected;
        } else if (res.p_value && *res.p_value < alpha) {
            ++rejected;
            ++rejected_nondeg;
        }
    }
    out.rejection_fraction = static_cast<double>(rejected) / reps;
    out.degenerate_fraction = static_cast<double>(degenerate) / reps;
    out.size_excluding_degenerate = static_cast<double>(rejected_nondeg) / reps;
    return out;
}

}  // namespace mpindep
