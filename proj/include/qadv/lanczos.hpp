#pragma once

#include "qadv/sparse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qadv {

struct LanczosOptions {
    double tol = 1e-12;   ///< residual estimate target, relative to a unit start vector
    int max_subspace = 64;
    int max_splits = 24;  ///< recursion depth guard for time-split restarts
};

namespace detail {

/// exp(theta * T) * e1 for the skew-symmetric tridiagonal T defined by the
/// off-diagonal magnitudes beta (T_{j+1,j} = beta_j = -T_{j,j+1}).
///
/// iT is Hermitian and diagonally similar (D = diag(i^j)) to the real
/// symmetric tridiagonal with off-diagonal beta; the small eigenproblem is
/// therefore real.
inline Eigen::VectorXd skew_tridiag_exp_e1(const std::vector<double>& beta, int m, double theta) {
    if (m == 1) {
        Eigen::VectorXd e(1);
        e[0] = 1.0;
        return e;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sub(m - 1);
    for (int j = 0; j + 1 < m; ++j) sub[j] = beta[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("skew_tridiag_exp_e1: tridiagonal eigensolve failed");
    const Eigen::MatrixXd& z = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();
    // g = Z exp(-i theta Lambda) Z^T e1; c_j = Re(i^j g_j)
    Eigen::VectorXcd w(m);
    for (int k = 0; k < m; ++k)
        w[k] = std::exp(std::complex<double>(0.0, -theta * lam[k])) * z(0, k);
    Eigen::VectorXcd g = z * w;
    Eigen::VectorXd c(m);
    for (int j = 0; j < m; ++j) {
        switch (j & 3) {
            case 0: c[j] = g[j].real(); break;
            case 1: c[j] = -g[j].imag(); break;
            case 2: c[j] = -g[j].real(); break;
            default: c[j] = g[j].imag(); break;
        }
    }
    return c;
}

}  // namespace detail

/// Applies exp(theta * K) to a real vector [x; y] of length 2n, where
/// K = [[0, A], [-A^T, 0]] is the real skew-symmetric generator equivalent to
/// -i H with H = [[0, iA], [-iA^T, 0]].
///
/// Lanczos with full reorthogonalization; K is skew-symmetric so the reduced
/// matrix is tridiagonal with zero diagonal. If the subspace cap is reached
/// before the residual estimate drops below tol, the evolution time is split
/// in half and applied as two consecutive steps.
class SkewLanczosPropagator {
  public:
    SkewLanczosPropagator(const SparseOperator& a, LanczosOptions opts = {})
        : a_(a), at_(transpose(a)), opts_(opts) {}

    const SparseOperator& op() const { return a_; }
    int dim() const { return a_.n; }

    /// In-place evolution of the stacked vector [x; y].
    void apply(double theta, Eigen::VectorXd& xy) const {
        if (xy.size() != 2 * a_.n)
            throw std::invalid_argument("SkewLanczosPropagator: vector length must be 2n");
        apply_segment(theta, xy, 0);
    }

  private:
    void kmatvec(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
        const int n = a_.n;
        out.resize(2 * n);
        // top = A * y, bottom = -A^T * x
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = a_.row_ptr[r]; k < a_.row_ptr[r + 1]; ++k)
                s += a_.val[k] * in[n + a_.col[k]];
            out[r] = s;
        }
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = at_.row_ptr[r]; k < at_.row_ptr[r + 1]; ++k)
                s += at_.val[k] * in[at_.col[k]];
            out[n + r] = -s;
        }
    }

    void apply_segment(double theta, Eigen::VectorXd& v, int depth) const {
        const double vnorm = v.norm();
        if (vnorm == 0.0) return;

        const int max_m = opts_.max_subspace;
        Eigen::MatrixXd q(2 * a_.n, max_m + 1);
        std::vector<double> beta;  // beta[j] couples q_j and q_{j+1}
        q.col(0) = v / vnorm;

        int m = 1;
        bool converged = false;
        Eigen::VectorXd c;
        Eigen::VectorXd w;
        int quiet = 0;
        while (m <= max_m) {
            kmatvec(q.col(m - 1), w);
            if (m >= 2) w += beta[m - 2] * q.col(m - 2);
            // full reorthogonalization, second pass if cancellation was heavy
            const double pre = w.norm();
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i < m; ++i) w -= (q.col(i).dot(w)) * q.col(i);
                if (w.norm() > 0.5 * pre) break;
            }
            const double b = w.norm();

            if (b < 1e-14) {  // invariant subspace: the projected result is exact
                c = detail::skew_tridiag_exp_e1(beta, m, theta);
                converged = true;
                break;
            }

            beta.push_back(b);
            q.col(m) = w / b;
            ++m;

            c = detail::skew_tridiag_exp_e1(beta, m, theta);
            const double est = b * std::abs(c[m - 1]);
            quiet = est <= opts_.tol ? quiet + 1 : 0;
            if (quiet >= 2) {
                converged = true;
                break;
            }
        }

        if (!converged) {
            if (depth >= opts_.max_splits)
                throw std::runtime_error("SkewLanczosPropagator: no convergence after splitting");
            apply_segment(theta / 2.0, v, depth + 1);
            apply_segment(theta / 2.0, v, depth + 1);
            return;
        }
        v = vnorm * (q.leftCols(static_cast<int>(c.size())) * c);
    }

    SparseOperator a_;
    SparseOperator at_;
    LanczosOptions opts_;
};

}  // namespace qadv
