#pragma once

#include <Eigen/Dense>

#include <lapacke.h>

#include <stdexcept>

namespace qadv {

struct SvdFactors {
    Eigen::MatrixXd u;      // left singular vectors, columns
    Eigen::VectorXd sigma;  // singular values, descending
    Eigen::MatrixXd v;      // right singular vectors, columns (A = U diag(sigma) V^T)
};

/// Full SVD of a square matrix via LAPACK dgesdd.
inline SvdFactors svd_factorize(Eigen::MatrixXd a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("svd_factorize: matrix must be square");
    SvdFactors f;
    f.u.resize(n, n);
    f.v.resize(n, n);
    f.sigma.resize(n);
    Eigen::MatrixXd vt(n, n);
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'A', n, n, a.data(), n,
                                           f.sigma.data(), f.u.data(), n, vt.data(), n);
    if (info != 0) throw std::runtime_error("svd_factorize: dgesdd failed, info = " +
                                            std::to_string(info));
    f.v = vt.transpose();
    return f;
}

/// Singular values only (cheaper than the full factorization).
inline Eigen::VectorXd singular_values(Eigen::MatrixXd a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("singular_values: matrix must be square");
    Eigen::VectorXd s(n);
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', n, n, a.data(), n, s.data(),
                                           nullptr, n, nullptr, n);
    if (info != 0) throw std::runtime_error("singular_values: dgesdd failed, info = " +
                                            std::to_string(info));
    return s;
}

}  // namespace qadv
