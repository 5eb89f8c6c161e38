#include "psfa/numerics.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "psfa/errors.hpp"

namespace psfa {

Matrix SymmetricPDFactor::reconstruct() const {
    return lower_ * lower_.transpose();
}

Matrix SymmetricPDFactor::solve(const Matrix& rhs) const {
    if (rhs.rows() != dimension()) {
        throw DimensionMismatch("pd_solve: rhs has " + std::to_string(rhs.rows()) +
                                " rows, factor dimension is " + std::to_string(dimension()));
    }
    Matrix y = lower_.triangularView<Eigen::Lower>().solve(rhs);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix SymmetricPDFactor::inverse() const {
    return solve(Matrix::Identity(dimension(), dimension()));
}

namespace {

// Returns false on a non-positive pivot.
bool try_cholesky(const Matrix& m, Matrix& lower, double& log_det) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return false;
    lower = llt.matrixL();
    double acc = 0.0;
    for (Index i = 0; i < lower.rows(); ++i) {
        const double d = lower(i, i);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        acc += std::log(d);
    }
    log_det = 2.0 * acc;
    return true;
}

}  // namespace

SymmetricPDFactor pd_factorize(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidParameter("pd_factorize: matrix is not square");
    }
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * scale) {
            throw InvalidParameter("pd_factorize: matrix is not symmetric");
        }
    }
    SymmetricPDFactor f;
    if (try_cholesky(m, f.lower_, f.log_det_)) return f;
    // One jitter retry; a failure here means the caller fed in garbage, not a
    // matrix worth rescuing further.
    const double jitter = 1e-10 * m.diagonal().mean();
    Matrix jittered = m;
    jittered.diagonal().array() += jitter;
    if (try_cholesky(jittered, f.lower_, f.log_det_)) return f;
    throw NotPositiveDefinite("pd_factorize: non-positive pivot after jitter retry");
}

Matrix pd_solve(const SymmetricPDFactor& f, const Matrix& rhs) {
    return f.solve(rhs);
}

double digamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("digamma: requires x > 0");
    }
    // Shift into the asymptotic regime, then use the Bernoulli-number
    // expansion psi(x) ~ log x - 1/(2x) - sum B_2k / (2k x^2k).
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double u = inv * inv;
    const double series =
        u * (1.0 / 12.0 -
             u * (1.0 / 120.0 -
                  u * (1.0 / 252.0 -
                       u * (1.0 / 240.0 -
                            u * (1.0 / 132.0 -
                                 u * (691.0 / 32760.0 - u * (1.0 / 12.0)))))));
    return result + std::log(x) - 0.5 * inv - series;
}

double lgamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("lgamma: requires x > 0");
    }
    return std::lgamma(x);
}

}  // namespace psfa
