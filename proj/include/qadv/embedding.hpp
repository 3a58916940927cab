#pragma once

#include "qadv/dense_svd.hpp"
#include "qadv/grid.hpp"
#include "qadv/lanczos.hpp"
#include "qadv/sparse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace qadv {

enum class Backend { DenseSvd, KrylovLanczos };

/// Result of one attempted time step: the unnormalized branch vectors of
/// exp(-iH theta) applied to [0; phi].
struct StepResult {
    Eigen::VectorXcd top;     ///< ancilla-0 branch, A-tilde * phi (a time step)
    Eigen::VectorXcd bottom;  ///< ancilla-1 branch, I-tilde * phi (near identity)
    double p_success = 0.0;   ///< ||top||^2
};

/// Hermitian embedding H = [[0, iA], [-iA^T, 0]] of a real time-marching
/// operator A, together with a backend applying one evolution step
/// Omega = exp(-iH theta).
///
/// DenseSvd implements the block structure of Omega literally through the
/// factorization A = U S V^T: the step maps phi to
///     top    = U sin(S theta) V^T phi
///     bottom = V cos(S theta) V^T phi
/// KrylovLanczos evolves the stacked 2N vector with a Lanczos process on the
/// equivalent real skew-symmetric generator. Layout is ancilla-major
/// (index = a*N + m) with the ancilla starting in a = 1.
///
/// A is zero-padded to the next power of two with unit diagonal rows, so the
/// padded directions evolve as an identity block and stay empty.
class HermitianEmbedding {
  public:
    HermitianEmbedding(const SparseOperator& a, double theta, Backend backend,
                       LanczosOptions krylov_opts = {})
        : theta_(theta), backend_(backend) {
        if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-15)
            throw std::invalid_argument("HermitianEmbedding: theta must lie in (0, pi/2]");
        const int n = static_cast<int>(next_pow2(a.n));
        a_ = pad_identity(a, n);
        if (backend_ == Backend::DenseSvd) {
            if (n > 4096)
                throw std::invalid_argument("HermitianEmbedding: DenseSvd limited to N <= 4096");
            svd_ = svd_factorize(a_.to_dense());
            sin_sigma_ = (svd_->sigma * theta_).array().sin();
            cos_sigma_ = (svd_->sigma * theta_).array().cos();
            if (n <= 64) verify_small();
        } else {
            krylov_.emplace(a_, krylov_opts);
        }
    }

    int dim() const { return a_.n; }
    double theta() const { return theta_; }
    Backend backend() const { return backend_; }
    const SparseOperator& op() const { return a_; }

    /// Dense Hermitian H, for inspection and small-scale oracles.
    Eigen::MatrixXcd dense_hamiltonian() const {
        const int n = a_.n;
        const Eigen::MatrixXd ad = a_.to_dense();
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        const std::complex<double> im(0.0, 1.0);
        h.topRightCorner(n, n) = im * ad;
        h.bottomLeftCorner(n, n) = -im * ad.transpose();
        return h;
    }

    /// sin(sigma_i(A) * theta) for all singular values; DenseSvd only.
    Eigen::VectorXd tilde_singular_values() const {
        if (backend_ != Backend::DenseSvd)
            throw std::invalid_argument("tilde_singular_values: DenseSvd backend required");
        return sin_sigma_;
    }

    StepResult apply_step(const Eigen::VectorXcd& phi) const {
        if (phi.size() != a_.n)
            throw std::invalid_argument("apply_step: state length does not match operator");
        if (std::abs(phi.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("apply_step: state is not normalized");

        StepResult res;
        const Eigen::VectorXd re = phi.real();
        const Eigen::VectorXd im = phi.imag();
        const bool complex_input = im.cwiseAbs().maxCoeff() > 0.0;

        Eigen::VectorXd top_re, bot_re, top_im, bot_im;
        apply_real(re, top_re, bot_re);
        if (complex_input) {
            apply_real(im, top_im, bot_im);
        } else {
            top_im = Eigen::VectorXd::Zero(a_.n);
            bot_im = Eigen::VectorXd::Zero(a_.n);
        }
        res.top.resize(a_.n);
        res.bottom.resize(a_.n);
        res.top.real() = top_re;
        res.top.imag() = top_im;
        res.bottom.real() = bot_re;
        res.bottom.imag() = bot_im;
        res.p_success = res.top.squaredNorm();

        const double total = res.p_success + res.bottom.squaredNorm();
        if (std::abs(total - 1.0) > 1e-6)
            throw std::runtime_error("apply_step: probability conservation violated");
        return res;
    }

    StepResult apply_step(const Statevector& sv) const { return apply_step(sv.amplitudes); }

  private:
    void apply_real(const Eigen::VectorXd& phi, Eigen::VectorXd& top, Eigen::VectorXd& bottom) const {
        if (backend_ == Backend::DenseSvd) {
            const Eigen::VectorXd w = svd_->v.transpose() * phi;
            top.noalias() = svd_->u * sin_sigma_.cwiseProduct(w);
            bottom.noalias() = svd_->v * cos_sigma_.cwiseProduct(w);
        } else {
            Eigen::VectorXd xy(2 * a_.n);
            xy.head(a_.n).setZero();
            xy.tail(a_.n) = phi;
            krylov_->apply(theta_, xy);
            top = xy.head(a_.n);
            bottom = xy.tail(a_.n);
        }
    }

    void verify_small() const {
        const Eigen::MatrixXcd h = dense_hamiltonian();
        if ((h - h.adjoint()).cwiseAbs().maxCoeff() != 0.0)
            throw std::runtime_error("HermitianEmbedding: H is not Hermitian");
        const Eigen::MatrixXd rec =
            svd_->u * svd_->sigma.asDiagonal() * svd_->v.transpose();
        const double scale = std::max(1.0, svd_->sigma.maxCoeff());
        if ((rec - a_.to_dense()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::runtime_error("HermitianEmbedding: SVD reconstruction check failed");
    }

    SparseOperator a_;
    double theta_;
    Backend backend_;
    std::optional<SvdFactors> svd_;
    Eigen::VectorXd sin_sigma_, cos_sigma_;
    std::optional<SkewLanczosPropagator> krylov_;
};

inline HermitianEmbedding embed(const SparseOperator& a, double theta, Backend backend,
                                LanczosOptions krylov_opts = {}) {
    return HermitianEmbedding(a, theta, backend, krylov_opts);
}

}  // namespace qadv
