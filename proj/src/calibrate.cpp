#include "mpindep/calibrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

namespace mpindep {

namespace {

// Run fn(r) for r = 0..reps-1 across a worker pool; results land in
// replicate-index order, so the outcome does not depend on thread count.
template <typename Fn>
std::vector<double> run_indexed(int reps, int threads, Fn fn) {
    std::vector<double> out(reps);
    threads = std::max(1, threads);
    if (threads == 1 || reps < 2) {
        for (int r = 0; r < reps; ++r) out[r] = fn(r);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= reps) return;
            out[r] = fn(r);
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, reps);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace

double scaled_statistic(const DataMatrix& x, const MnContext& ctx) {
    EigenSpectrum spec;
    if (x.field == Field::real) {
        spec = eigenvalues_sym(sample_covariance(x), x.n());
    } else {
        // Complex generators already carry the 1/sqrt(n) scale, so the Gram
        // matrix X^H X is the sample covariance.
        SquareMatrix a;
        a.field = Field::complex;
        a.hermitian = true;
        a.cx.noalias() = x.cx.adjoint() * x.cx;
        a.cx = 0.5 * (a.cx + a.cx.adjoint().eval());
        spec = eigenvalues_herm(a, x.n());
    }
    return statistic_mn(spec, ctx).scaled;
}

std::vector<double> replicate_statistics(const ModelSpec& model, int reps,
                                         std::uint64_t seed, StreamRole role,
                                         const WeightMeasure& weights,
                                         int threads) {
    const double c_n =
        static_cast<double>(model.p) / static_cast<double>(model.n);
    const MnContext ctx(weights, c_n);
    return run_indexed(reps, threads, [&](int r) {
        const std::uint64_t rs =
            substream(seed, role, static_cast<std::uint64_t>(r));
        return scaled_statistic(generate(model, rs), ctx);
    });
}

std::pair<double, double> order_statistic_quantiles(
    const std::vector<double>& sorted_stats, double alpha) {
    const auto k = static_cast<int>(sorted_stats.size());
    const int j = static_cast<int>(std::floor(k * alpha / 2.0));
    if (j < 1)
        throw InsufficientReplicates(
            "need K * alpha / 2 >= 1 replicates for the order-statistic "
            "critical points");
    return {sorted_stats[j - 1], sorted_stats[k - j]};
}

NullCalibration calibrate_model(const ModelSpec& null_model, int reps,
                                double alpha, std::uint64_t seed,
                                const WeightMeasure& weights, int threads) {
    NullCalibration cal;
    cal.sorted_stats = replicate_statistics(null_model, reps, seed,
                                            StreamRole::calibration, weights,
                                            threads);
    std::sort(cal.sorted_stats.begin(), cal.sorted_stats.end());
    std::tie(cal.lower_q, cal.upper_q) =
        order_statistic_quantiles(cal.sorted_stats, alpha);
    cal.alpha = alpha;
    cal.n = null_model.n;
    cal.p = null_model.p;
    cal.weight_fingerprint = weights.fingerprint();
    return cal;
}

NullCalibration simulate_null(Eigen::Index n, Eigen::Index p, Innovation innov,
                              int reps, double alpha, std::uint64_t seed,
                              const WeightMeasure& weights, int threads) {
    ModelSpec m;
    m.kind = ModelKind::iid;
    m.innovation = innov;
    m.n = n;
    m.p = p;
    return calibrate_model(m, reps, alpha, seed, weights, threads);
}

double empirical_size(Eigen::Index n, Eigen::Index p, Innovation innov,
                      int cal_reps, int eval_reps, double alpha,
                      std::uint64_t seed, const WeightMeasure& weights,
                      int threads) {
    const NullCalibration cal =
        simulate_null(n, p, innov, cal_reps, alpha, seed, weights, threads);
    ModelSpec m;
    m.kind = ModelKind::iid;
    m.innovation = innov;
    m.n = n;
    m.p = p;
    const std::vector<double> stats = replicate_statistics(
        m, eval_reps, seed, StreamRole::evaluation, weights, threads);
    int rejections = 0;
    for (double s : stats)
        if (s <= cal.lower_q || s >= cal.upper_q) ++rejections;
    return static_cast<double>(rejections) / eval_reps;
}

PowerResult empirical_power(const ModelSpec& model, int cal_reps,
                            int eval_reps, double alpha, std::uint64_t seed,
                            const WeightMeasure& weights, int threads) {
    const NullCalibration cal = calibrate_model(null_counterpart(model),
                                                cal_reps, alpha, seed, weights,
                                                threads);
    const std::vector<double> stats = replicate_statistics(
        model, eval_reps, seed, StreamRole::evaluation, weights, threads);
    PowerResult res;
    int rejections = 0;
    for (double s : stats)
        if (s <= cal.lower_q || s >= cal.upper_q) ++rejections;
    res.power = static_cast<double>(rejections) / eval_reps;
    if (model.kind == ModelKind::panel) {
        // Observability hook for the independence assumption on the u_i:
        // the cross-product diagnostic with ubar = E u^2 = 2 for N(1, 1).
        double acc = 0.0;
        for (int r = 0; r < eval_reps; ++r) {
            const std::uint64_t rs = substream(seed, StreamRole::evaluation,
                                               static_cast<std::uint64_t>(r));
            acc += panel_u_diagnostic(panel_u(model.p, model.u_spec, rs), 2.0);
        }
        res.panel_diagnostic = acc / eval_reps;
    }
    return res;
}

}  // namespace mpindep
