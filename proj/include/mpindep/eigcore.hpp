#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mpindep/errors.hpp"

namespace mpindep {

enum class Field { real, complex };

// n x p panel of observations; columns are the p vectors under test.
struct DataMatrix {
    Field field = Field::real;
    Eigen::MatrixXd re;    // used when field == real
    Eigen::MatrixXcd cx;   // used when field == complex

    static DataMatrix real(Eigen::MatrixXd m) {
        DataMatrix d;
        d.field = Field::real;
        d.re = std::move(m);
        return d;
    }
    static DataMatrix complex(Eigen::MatrixXcd m) {
        DataMatrix d;
        d.field = Field::complex;
        d.cx = std::move(m);
        return d;
    }

    Eigen::Index n() const { return field == Field::real ? re.rows() : cx.rows(); }
    Eigen::Index p() const { return field == Field::real ? re.cols() : cx.cols(); }
};

struct SquareMatrix {
    Field field = Field::real;
    bool hermitian = false;
    Eigen::MatrixXd re;
    Eigen::MatrixXcd cx;

    Eigen::Index dim() const { return field == Field::real ? re.rows() : cx.rows(); }
};

// Sorted eigenvalues of a p x p sample covariance matrix, with the
// dimensions they came from.
struct EigenSpectrum {
    Eigen::VectorXd values;  // ascending
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    double c_n = 0.0;        // p / n
};

// A_n = (1/n) X* X. Uncentered by construction.
SquareMatrix sample_covariance(const DataMatrix& x);

// All eigenvalues of a real symmetric matrix, ascending. Householder
// tridiagonalization plus implicit-shift QL; eigenvalues only.
// Values in [-eps_eig, 0) with eps_eig = 1e-9 * max(1, ||A||_F) are
// clipped to 0 (A_n is PSD; tiny negatives are roundoff).
EigenSpectrum eigenvalues_sym(const SquareMatrix& a, Eigen::Index n_provenance = 0);

// Eigenvalues of a complex Hermitian matrix through the real 2p x 2p
// embedding [[Re A, -Im A], [Im A, Re A]]; each eigenvalue of A appears
// twice, so every second value of the sorted embedded spectrum is returned.
EigenSpectrum eigenvalues_herm(const SquareMatrix& a, Eigen::Index n_provenance = 0);

namespace detail {

// Tridiagonal QL with implicit shifts on (d, e); e[0] unused. When q is
// non-null it must start as the tridiagonalizing transform and accumulates
// eigenvectors (test/diagnostic path; the hot path passes nullptr).
// Throws NonConvergence after the sweep budget (50 * dim total).
void tql_implicit(Eigen::VectorXd& d, Eigen::VectorXd& e, Eigen::MatrixXd* q);

// Householder reduction to tridiagonal form. A is destroyed. When q is
// non-null it receives the accumulated orthogonal transform.
void tridiagonalize(Eigen::MatrixXd a, Eigen::VectorXd& d, Eigen::VectorXd& e,
                    Eigen::MatrixXd* q);

// Full decomposition of a real symmetric matrix; used by tests to verify
// the residual contract ||A v - lambda v||.
void eigen_sym_full(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors);

}  // namespace detail

}  // namespace mpindep
