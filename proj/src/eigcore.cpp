#include "mpindep/eigcore.hpp"

#include <algorithm>
#include <cmath>

namespace mpindep {

namespace {

double max_abs(const Eigen::MatrixXd& a) {
    return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

void check_symmetric(const Eigen::MatrixXd& a) {
    const double tol = 1e-12 * std::max(1.0, max_abs(a));
    const double dev = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (dev > tol) throw NotHermitian("matrix is not symmetric within tolerance");
}

void check_hermitian(const Eigen::MatrixXcd& a) {
    const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
    const double tol = 1e-12 * std::max(1.0, scale);
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) throw NotHermitian("matrix is not Hermitian within tolerance");
}

EigenSpectrum finish_spectrum(Eigen::VectorXd vals, double frob, Eigen::Index n,
                              Eigen::Index p) {
    std::sort(vals.begin(), vals.end());
    const double eps_eig = 1e-9 * std::max(1.0, frob);
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals[i] >= -eps_eig && vals[i] < 0.0) vals[i] = 0.0;
    }
    EigenSpectrum s;
    s.values = std::move(vals);
    s.n = n;
    s.p = p;
    s.c_n = n > 0 ? static_cast<double>(p) / static_cast<double>(n) : 0.0;
    return s;
}

}  // namespace

SquareMatrix sample_covariance(const DataMatrix& x) {
    if (x.n() < 1 || x.p() < 1)
        throw DimensionMismatch("sample_covariance: empty data matrix");
    SquareMatrix a;
    a.field = x.field;
    a.hermitian = true;
    const double inv_n = 1.0 / static_cast<double>(x.n());
    if (x.field == Field::real) {
        a.re.noalias() = inv_n * (x.re.transpose() * x.re);
        a.re = 0.5 * (a.re + a.re.transpose().eval());  // kill roundoff asymmetry
    } else {
        a.cx.noalias() = inv_n * (x.cx.adjoint() * x.cx);
        a.cx = 0.5 * (a.cx + a.cx.adjoint().eval());
    }
    return a;
}

namespace detail {

void tridiagonalize(Eigen::MatrixXd a, Eigen::VectorXd& d, Eigen::VectorXd& e,
                    Eigen::MatrixXd* q) {
    const Eigen::Index n = a.rows();
    d.resize(n);
    e.resize(n);
    for (Eigen::Index i = n - 1; i >= 1; --i) {
        const Eigen::Index l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (Eigen::Index k = 0; k < i; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (Eigen::Index j = 0; j < i; ++j) {
                    if (q) a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (Eigen::Index k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (Eigen::Index k = j + 1; k < i; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (Eigen::Index j = 0; j < i; ++j) {
                    f = a(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (Eigen::Index k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    if (q) d[0] = 0.0;
    e[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (q) {
            if (d[i] != 0.0) {
                for (Eigen::Index j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (Eigen::Index k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                    for (Eigen::Index k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
                }
            }
            d[i] = a(i, i);
            a(i, i) = 1.0;
            for (Eigen::Index j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
        } else {
            d[i] = a(i, i);
        }
    }
    if (q) *q = std::move(a);
}

void tql_implicit(Eigen::VectorXd& d, Eigen::VectorXd& e, Eigen::MatrixXd* q) {
    const Eigen::Index n = d.size();
    const long budget = 50 * static_cast<long>(n);
    long sweeps = 0;
    for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (Eigen::Index l = 0; l < n; ++l) {
        Eigen::Index m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++sweeps > budget) throw NonConvergence(static_cast<int>(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                Eigen::Index i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (q) {
                        for (Eigen::Index k = 0; k < n; ++k) {
                            f = (*q)(k, i + 1);
                            (*q)(k, i + 1) = s * (*q)(k, i) + c * f;
                            (*q)(k, i) = c * (*q)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void eigen_sym_full(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors) {
    Eigen::VectorXd e;
    tridiagonalize(a, values, e, &vectors);
    tql_implicit(values, e, &vectors);
    // Sort ascending, carrying the columns along.
    std::vector<Eigen::Index> order(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index x, Eigen::Index y) { return values[x] < values[y]; });
    Eigen::VectorXd vs(values.size());
    Eigen::MatrixXd qs(vectors.rows(), vectors.cols());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        vs[i] = values[order[i]];
        qs.col(i) = vectors.col(order[i]);
    }
    values = std::move(vs);
    vectors = std::move(qs);
}

}  // namespace detail

EigenSpectrum eigenvalues_sym(const SquareMatrix& a, Eigen::Index n_provenance) {
    if (a.field != Field::real)
        throw NotHermitian("eigenvalues_sym expects a real symmetric matrix");
    check_symmetric(a.re);
    const double frob = a.re.norm();
    if (a.re.rows() == 1)
        return finish_spectrum(a.re.diagonal(), frob, n_provenance, 1);
    Eigen::VectorXd d, e;
    detail::tridiagonalize(a.re, d, e, nullptr);
    detail::tql_implicit(d, e, nullptr);
    return finish_spectrum(std::move(d), frob, n_provenance, a.re.rows());
}

EigenSpectrum eigenvalues_herm(const SquareMatrix& a, Eigen::Index n_provenance) {
    if (a.field != Field::complex)
        throw NotHermitian("eigenvalues_herm expects a complex matrix");
    check_hermitian(a.cx);
    const Eigen::Index p = a.cx.rows();
    // Real embedding [[Re, -Im], [Im, Re]]: its 2p eigenvalues are those of
    // A, each doubled.
    Eigen::MatrixXd b(2 * p, 2 * p);
    b.topLeftCorner(p, p) = a.cx.real();
    b.bottomRightCorner(p, p) = a.cx.real();
    b.topRightCorner(p, p) = -a.cx.imag();
    b.bottomLeftCorner(p, p) = a.cx.imag();
    b = 0.5 * (b + b.transpose().eval());
    Eigen::VectorXd d, e;
    if (p == 1) {
        d = b.diagonal().head(1);
    } else {
        detail::tridiagonalize(b, d, e, nullptr);
        detail::tql_implicit(d, e, nullptr);
        std::sort(d.begin(), d.end());
        Eigen::VectorXd half(p);
        for (Eigen::Index i = 0; i < p; ++i) half[i] = d[2 * i];
        d = std::move(half);
    }
    return finish_spectrum(std::move(d), a.cx.norm(), n_provenance, p);
}

}  // namespace mpindep
