#include "mpindep/mp_law.hpp"

#include <cmath>
#include <numbers>

namespace mpindep {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{itx} integrated against the continuous part, on the supplied canonical
// rule mapped to theta in [-pi/2, pi/2].
std::complex<double> charfn_continuous(double t, const MpParams& p,
                                       const QuadratureRule& quad) {
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < quad.nodes.size(); ++j) {
        const double theta = quad.nodes[j] * (kPi / 2.0);
        const double w = quad.weights[j] * (kPi / 2.0);
        const double st = std::sin(theta);
        const double ct = std::cos(theta);
        const double x = mid + half * st;
        // f_c(x) dx under the substitution: (half*cos)^2 / (2 pi c x) dtheta.
        // At c = 1 the ratio cos^2/x extends continuously to theta = -pi/2.
        double g;
        if (x > 0.0) {
            g = half * half * ct * ct / (2.0 * kPi * p.c * x);
        } else {
            // Only reachable at c = 1, theta = -pi/2 (trapezoid endpoints);
            // limit of cos^2/x there is 1/half.
            g = half / (2.0 * kPi * p.c);
        }
        acc += w * g * std::complex<double>(std::cos(t * x), std::sin(t * x));
    }
    return acc;
}

}  // namespace

MpParams MpParams::from_ratio(double c) {
    if (!(c > 0.0)) throw NonPositiveRatio("aspect ratio c must be positive");
    MpParams p;
    p.c = c;
    const double sc = std::sqrt(c);
    p.a = (1.0 - sc) * (1.0 - sc);
    p.b = (1.0 + sc) * (1.0 + sc);
    p.atom = c > 1.0 ? 1.0 - 1.0 / c : 0.0;
    return p;
}

std::pair<double, double> mp_support(double c) {
    const MpParams p = MpParams::from_ratio(c);
    return {p.a, p.b};
}

double mp_density(double x, const MpParams& p) {
    if (x <= p.a || x >= p.b) return 0.0;
    if (x <= 0.0) return 0.0;
    return std::sqrt((p.b - x) * (x - p.a)) / (2.0 * kPi * x * p.c);
}

QuadratureRule QuadratureRule::gauss_legendre(int m) {
    if (m < 2) throw UsageError("gauss_legendre: need at least 2 nodes");
    QuadratureRule r;
    r.kind = QuadKind::gauss_legendre;
    r.nodes.resize(m);
    r.weights.resize(m);
    // Newton iteration from the Chebyshev-like initial guess; symmetric pairs.
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.nodes[i] = -x;
        r.weights[i] = w;
        r.nodes[m - 1 - i] = x;
        r.weights[m - 1 - i] = w;
    }
    return r;
}

QuadratureRule QuadratureRule::trapezoid(int m) {
    if (m < 2) throw UsageError("trapezoid: need at least 2 nodes");
    QuadratureRule r;
    r.kind = QuadKind::trapezoid;
    r.nodes.resize(m);
    r.weights.resize(m);
    const double h = 2.0 / (m - 1);
    for (int i = 0; i < m; ++i) {
        r.nodes[i] = -1.0 + i * h;
        r.weights[i] = (i == 0 || i == m - 1) ? 0.5 * h : h;
    }
    return r;
}

std::complex<double> mp_charfn(double t, const MpParams& p,
                               const QuadratureRule& quad) {
    if (quad.nodes.size() < 2)
        throw UsageError("mp_charfn: quadrature needs at least 2 nodes");
    const std::complex<double> coarse = charfn_continuous(t, p, quad);
    const int doubled = static_cast<int>(quad.nodes.size()) * 2;
    const QuadratureRule fine = quad.kind == QuadKind::gauss_legendre
                                    ? QuadratureRule::gauss_legendre(doubled)
                                    : QuadratureRule::trapezoid(doubled);
    const std::complex<double> refined = charfn_continuous(t, p, fine);
    if (std::abs(refined - coarse) > 1e-8)
        throw QuadratureTooCoarse("mp_charfn: doubled-resolution check failed");
    return p.atom + refined;
}

double mp_moments(const MpParams& p, int k) {
    if (k < 1 || k > 4) throw UsageError("mp_moments: order must be in 1..4");
    const QuadratureRule quad = QuadratureRule::gauss_legendre(128);
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    double acc = 0.0;
    for (std::size_t j = 0; j < quad.nodes.size(); ++j) {
        const double theta = quad.nodes[j] * (kPi / 2.0);
        const double w = quad.weights[j] * (kPi / 2.0);
        const double x = mid + half * std::sin(theta);
        const double ct = std::cos(theta);
        const double g =
            x > 0.0 ? half * half * ct * ct / (2.0 * kPi * p.c * x) : 0.0;
        acc += w * g * std::pow(x, k);
    }
    return acc;
}

std::complex<double> mp_stieltjes(std::complex<double> z, double c) {
    if (!(c > 0.0)) throw NonPositiveRatio("aspect ratio c must be positive");
    if (!(z.imag() > 0.0))
        throw LowerHalfPlane("mp_stieltjes requires Im z > 0");
    const std::complex<double> w = 1.0 - c - z;
    std::complex<double> root = std::sqrt(w * w - 4.0 * c * z);
    std::complex<double> m = (w + root) / (2.0 * c * z);
    if (m.imag() <= 0.0) m = (w - root) / (2.0 * c * z);
    return m;
}

std::complex<double> underline_stieltjes(std::complex<double> z, double c) {
    return -(1.0 - c) / z + c * mp_stieltjes(z, c);
}

}  // namespace mpindep
