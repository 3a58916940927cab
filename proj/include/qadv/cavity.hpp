#pragma once

#include "qadv/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace qadv {

/// Lid-driven cavity problem: square domain, top wall sliding at u_wall,
/// Reynolds number u_wall * L / nu.
struct CavitySpec {
    int n = 64;              ///< nodes per side
    double reynolds = 100.0;
    double u_wall = 1.0;
    double tol = 1e-8;       ///< steady-state residual tolerance (relative vorticity change)
    long max_iters = 400000;
};

namespace detail {

struct CavityState {
    Eigen::MatrixXd psi;    // streamfunction, psi(i, j), i along x
    Eigen::MatrixXd omega;  // vorticity
};

}  // namespace detail

/// Steady incompressible velocity by streamfunction-vorticity relaxation:
/// Gauss-Seidel/SOR sweeps for the psi Poisson equation, Thom wall vorticity,
/// donor-cell convection in the vorticity transport equation. Velocities are
/// centered derivatives of psi, so the interior discrete divergence vanishes
/// identically.
inline VelocityField solve_lid_cavity(const CavitySpec& spec) {
    if (spec.n < 16) throw std::invalid_argument("solve_lid_cavity: n must be at least 16");
    if (!(spec.reynolds > 0.0)) throw std::invalid_argument("solve_lid_cavity: Re must be positive");
    if (!(spec.tol > 0.0)) throw std::invalid_argument("solve_lid_cavity: tol must be positive");

    const int n = spec.n;
    const double h = 1.0 / (n - 1);
    const double h2 = h * h;
    const double re = spec.reynolds;
    const double lid = spec.u_wall;
    const double sor = 2.0 / (1.0 + std::sin(std::numbers::pi / (n - 1)));

    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd omg = Eigen::MatrixXd::Zero(n, n);

    bool converged = false;
    for (long it = 0; it < spec.max_iters && !converged; ++it) {
        // streamfunction Poisson sweeps: lap(psi) = -omega, psi = 0 on walls
        for (int sweep = 0; sweep < 3; ++sweep)
            for (int j = 1; j < n - 1; ++j)
                for (int i = 1; i < n - 1; ++i) {
                    const double gs = 0.25 * (psi(i + 1, j) + psi(i - 1, j) + psi(i, j + 1) +
                                              psi(i, j - 1) + h2 * omg(i, j));
                    psi(i, j) += sor * (gs - psi(i, j));
                }

        // Thom wall vorticity; the lid row carries the moving-wall term
        for (int i = 0; i < n; ++i) {
            omg(i, 0) = -2.0 * psi(i, 1) / h2;
            omg(i, n - 1) = -2.0 * (psi(i, n - 2) + h * lid) / h2;
        }
        for (int j = 0; j < n; ++j) {
            omg(0, j) = -2.0 * psi(1, j) / h2;
            omg(n - 1, j) = -2.0 * psi(n - 2, j) / h2;
        }

        // steady vorticity transport, donor-cell convection, Gauss-Seidel
        double max_delta = 0.0;
        double max_omega = 1e-30;
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i) {
                const double u = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * h);
                const double v = -(psi(i + 1, j) - psi(i - 1, j)) / (2.0 * h);
                const double up = std::max(u, 0.0), um = std::min(u, 0.0);
                const double vp = std::max(v, 0.0), vm = std::min(v, 0.0);
                const double diag = 4.0 / (re * h2) + (up - um + vp - vm) / h;
                const double rhs = (omg(i + 1, j) + omg(i - 1, j) + omg(i, j + 1) +
                                    omg(i, j - 1)) / (re * h2) +
                                   (up * omg(i - 1, j) - um * omg(i + 1, j) +
                                    vp * omg(i, j - 1) - vm * omg(i, j + 1)) / h;
                const double next = rhs / diag;
                max_delta = std::max(max_delta, std::abs(next - omg(i, j)));
                omg(i, j) = next;
                max_omega = std::max(max_omega, std::abs(next));
            }
        converged = max_delta / max_omega < spec.tol;
    }
    if (!converged)
        throw std::runtime_error("solve_lid_cavity: no convergence within the iteration cap");

    Grid2D grid = make_grid(n, n, Boundary::DirichletWall, Boundary::DirichletWall);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) {
            u[grid.index(i, j)] = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * h);
            v[grid.index(i, j)] = -(psi(i + 1, j) - psi(i - 1, j)) / (2.0 * h);
        }
    // lid row; corner nodes keep stationary-wall values
    for (int i = 1; i < n - 1; ++i) u[grid.index(i, n - 1)] = lid;
    return VelocityField(grid, std::move(u), std::move(v));
}

/// Central-difference divergence at interior nodes, zero on the boundary.
inline ScalarField divergence(const VelocityField& vel) {
    const Grid2D& g = vel.grid;
    Eigen::VectorXd div = Eigen::VectorXd::Zero(g.size());
    if (g.nx > 2 && g.ny > 2) {
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i)
                div[g.index(i, j)] =
                    (vel.u[g.index(i + 1, j)] - vel.u[g.index(i - 1, j)]) / (2.0 * g.dx) +
                    (vel.v[g.index(i, j + 1)] - vel.v[g.index(i, j - 1)]) / (2.0 * g.dy);
    }
    return ScalarField(g, std::move(div));
}

}  // namespace qadv
