#ifndef PSFA_NUMERICS_HPP
#define PSFA_NUMERICS_HPP

#include "psfa/types.hpp"

namespace psfa {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
// with its log-determinant. Every (.)^-1 and log|.| in the update rules and
// the ELBO goes through this type.
class SymmetricPDFactor {
public:
    SymmetricPDFactor() = default;

    Index dimension() const { return lower_.rows(); }
    // L with M = L L^T; strictly positive diagonal.
    const Matrix& factor() const { return lower_; }
    double log_det() const { return log_det_; }

    Matrix reconstruct() const;
    // Solves M x = rhs. Throws DimensionMismatch if rhs.rows() != dimension().
    Matrix solve(const Matrix& rhs) const;
    Matrix inverse() const;

private:
    friend SymmetricPDFactor pd_factorize(const Matrix& m);
    Matrix lower_;
    double log_det_ = 0.0;
};

// Factorizes a symmetric positive definite matrix. If the first attempt hits a
// non-positive pivot, retries once with 1e-10 * mean(diagonal) added to the
// diagonal, then throws NotPositiveDefinite. Throws InvalidParameter if m is
// not square or not symmetric to 1e-12 relative.
SymmetricPDFactor pd_factorize(const Matrix& m);

Matrix pd_solve(const SymmetricPDFactor& f, const Matrix& rhs);

// psi(x) for x > 0, accurate to ~1e-12 relative for x >= 1e-6.
// Throws DomainError for x <= 0 (or NaN).
double digamma(double x);

// log Gamma(x) for x > 0. Throws DomainError for x <= 0 (or NaN).
double lgamma(double x);

}  // namespace psfa

#endif
