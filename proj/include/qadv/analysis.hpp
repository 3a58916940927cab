#pragma once

#include "qadv/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qadv {

/// Toeplitz diagonals of the A-tilde and I-tilde blocks for the 4x4 circulant
/// second-order central advection operator. Exact closed forms in r and theta.
struct TildeEntries {
    double a_d0, a_d1, a_dm1, a_d2;  // A-tilde: main, super, sub, second diagonals
    double i_d0, i_d2;               // I-tilde: main and second diagonals (d+-1 vanish)
};

namespace detail {
inline void check_theta(double theta) {
    if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-15)
        throw std::invalid_argument("theta must lie in (0, pi/2]");
}
}  // namespace detail

inline TildeEntries tilde_entries_4x4(double r, double theta) {
    if (r < 0.0) throw std::invalid_argument("tilde_entries_4x4: r must be nonnegative");
    detail::check_theta(theta);
    const double s = std::sqrt(r * r + 1.0);
    const double sin_s = std::sin(theta * s) / s;
    TildeEntries e;
    e.a_d0 = 0.5 * (std::sin(theta) + sin_s);
    e.a_d1 = -0.5 * r * sin_s;
    e.a_dm1 = 0.5 * r * sin_s;
    e.a_d2 = 0.5 * (std::sin(theta) - sin_s);
    e.i_d0 = 0.5 * (std::cos(theta) + std::cos(theta * s));
    e.i_d2 = 0.5 * (std::cos(theta) - std::cos(theta * s));
    return e;
}

/// Spectral norm of the per-step error of A-tilde relative to A.
inline double e_a_norm(double r, double theta) {
    const double s = std::sqrt(r * r + 1.0);
    return 0.5 * (std::sin(theta) * s - std::sin(theta * s));
}

/// Spectral norm of the per-step error of I-tilde relative to the identity;
/// the worst case for a failed postselection.
inline double e_i_norm(double r, double theta) {
    const double s = std::sqrt(r * r + 1.0);
    return 0.5 * (std::cos(theta) - std::cos(theta * s));
}

/// Angle at which the two bound branches meet.
inline double branch_theta(double r) {
    return std::numbers::pi / (1.0 + std::sqrt(r * r + 1.0));
}

/// Worst-case probability of a successful time step.
inline double p_min(double r, double theta) {
    detail::check_theta(theta);
    const double s = std::sqrt(r * r + 1.0);
    const double x = theta <= branch_theta(r) ? std::sin(theta) : std::sin(theta * s);
    return x * x;
}

/// Error bound per unit simulation time for the advection operator.
inline double advection_error_bound(double r, double theta) {
    if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("advection_error_bound: r in (0, 1]");
    detail::check_theta(theta);
    const double s = std::sqrt(r * r + 1.0);
    const double cos_gap = std::cos(theta) - std::cos(theta * s);
    const double ea_part = std::sin(theta) * s - std::sin(theta * s);
    const double branch_angle = theta <= branch_theta(r) ? theta : theta * s;
    const double cot = std::cos(branch_angle) / std::sin(branch_angle);
    return (cos_gap * cot * cot + ea_part) / (2.0 * r);
}

/// Error bound per unit simulation time for the heat-equation operator.
/// Diverges toward r_h = 0.25 and r_h = 0.5; evaluation at the poles yields
/// +infinity rather than throwing.
inline double heat_error_bound(double r_h, double theta) {
    if (!(r_h > 0.0) || r_h > 0.5)
        throw std::invalid_argument("heat_error_bound: r_h must lie in (0, 0.5]");
    detail::check_theta(theta);
    if (r_h == 0.5) return std::numeric_limits<double>::infinity();

    const double a1 = theta * (1.0 - 4.0 * r_h);
    const double a2 = theta * (1.0 - 2.0 * r_h);
    const double a3 = theta * (1.0 - 3.0 * r_h);
    const double a4 = theta * (1.0 - r_h);
    const double common = std::abs(std::sin(a3) + 3.0 * std::sin(a4)) * std::sin(r_h * theta);

    double num, cot_angle;
    if (r_h <= 1.0 / 3.0) {
        num = std::abs((8.0 * r_h - 3.0) * std::sin(theta) + std::sin(a1) + 2.0 * std::sin(a2));
        cot_angle = a1;
    } else {
        num = std::abs((1.0 - 4.0 * r_h) * std::sin(theta) + (4.0 * r_h - 3.0) * std::sin(a1) +
                       (2.0 - 8.0 * r_h) * std::sin(a2));
        cot_angle = a2;
    }
    const double cot = std::cos(cot_angle) / std::sin(cot_angle);
    return (num / (2.0 - 4.0 * r_h) + common * cot * cot) / (2.0 * r_h);
}

/// Method-of-characteristics solution of the channel flow at time t,
/// normalized by the recorded initial-state norm.
inline ScalarField channel_analytical(const Grid2D& grid, const VelocityField& vel, double t,
                                      double init_norm) {
    if (t < 0.0) throw std::invalid_argument("channel_analytical: t must be nonnegative");
    if (!(init_norm > 0.0)) throw std::invalid_argument("channel_analytical: bad init norm");
    Eigen::VectorXd vals(grid.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const int m = grid.index(i, j);
            vals[m] = (std::sin(two_pi * (grid.x(i) - vel.u[m] * t)) + 1.0) / init_norm;
        }
    return ScalarField(grid, std::move(vals));
}

/// Pointwise error as a percentage of the reference maximum.
inline ScalarField error_map(const Statevector& state, const ScalarField& reference) {
    const double ref_max = reference.values.maxCoeff();
    if (!(ref_max > 0.0)) throw std::invalid_argument("error_map: reference maximum is not positive");
    ScalarField amp = statevector_to_field(state, reference.grid);
    Eigen::VectorXd err = 100.0 * (reference.values - amp.values).cwiseAbs() / ref_max;
    return ScalarField(reference.grid, std::move(err));
}

/// Mean absolute pointwise difference as a percentage of the reference maximum.
inline double mean_abs_error(const Statevector& state, const ScalarField& reference) {
    return error_map(state, reference).values.mean();
}

inline double max_abs_error(const Statevector& state, const ScalarField& reference) {
    return error_map(state, reference).values.maxCoeff();
}

}  // namespace qadv
