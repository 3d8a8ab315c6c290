#pragma once

#include <complex>
#include <vector>

#include "mpindep/errors.hpp"

namespace mpindep {

// Marcenko-Pastur reference law for aspect ratio c.
struct MpParams {
    double c;     // p/n or its limit
    double a;     // lower edge (1 - sqrt(c))^2
    double b;     // upper edge (1 + sqrt(c))^2
    double atom;  // point mass at 0: max(0, 1 - 1/c)

    static MpParams from_ratio(double c);
};

enum class QuadKind { gauss_legendre, trapezoid };

// Nodes/weights on the canonical interval [-1, 1]; weights sum to 2.
struct QuadratureRule {
    QuadKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadratureRule gauss_legendre(int m);
    static QuadratureRule trapezoid(int m);
};

// (a, b) support edges.
std::pair<double, double> mp_support(double c);

// Continuous density f_c(x) on [a, b]; 0 outside. The atom is reported in
// MpParams, not here.
double mp_density(double x, const MpParams& params);

// s(t) = atom + \int_a^b e^{itx} f_c(x) dx, via the substitution
// x(theta) = (a+b)/2 + ((b-a)/2) sin(theta) which absorbs the edge
// square-root into a smooth cos^2 factor. A doubled-resolution re-evaluation
// guards accuracy; a modulus difference above 1e-8 raises
// QuadratureTooCoarse.
std::complex<double> mp_charfn(double t, const MpParams& params,
                               const QuadratureRule& quad);

// k-th moment of F^c, k in {1,2,3,4}. The atom contributes nothing.
double mp_moments(const MpParams& params, int k);

// Closed-form Stieltjes transform of the M-P law,
// m(z) = [(1-c-z) + sqrt((1-c-z)^2 - 4cz)] / (2cz), branch with Im m > 0.
std::complex<double> mp_stieltjes(std::complex<double> z, double c);

// Companion transform of (1/n) X X*: m_(z) = -(1-c)/z + c m(z).
std::complex<double> underline_stieltjes(std::complex<double> z, double c);

}  // namespace mpindep
