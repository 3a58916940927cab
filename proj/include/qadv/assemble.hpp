#pragma once

#include "qadv/grid.hpp"
#include "qadv/sparse.hpp"
#include "qadv/stencil.hpp"

#include <cmath>
#include <iostream>

namespace qadv {

/// CFL number r = max velocity component * dt / min active spacing.
inline double cfl_number(const Grid2D& grid, const VelocityField& vel, double dt) {
    return vel.max_component() * dt / grid.min_spacing();
}

namespace detail {

struct AxisView {
    int n;
    Boundary bc;
};

/// Stencil for one node of one axis. Within k points of a wall the nominal
/// stencil would read wall nodes (or beyond); it switches to the second-order
/// one-sided stencil pointing into the domain, which keeps every interior row
/// off the wall columns. Wall values then enter the evolution only through
/// their own identity rows, and the wall subspace decouples exactly.
inline StencilCoeffs node_stencil(const StencilSpec& spec, int sign, int q, const AxisView& ax) {
    StencilCoeffs c = spec.family == StencilFamily::Central ? derivative_coeffs(spec, 0)
                                                            : derivative_coeffs(spec, sign);
    if (ax.bc == Boundary::DirichletWall) {
        const bool roomy = ax.n >= 5;  // n = 4 has too few interior nodes to avoid the walls
        const int lo = roomy ? 1 : 0;
        const int hi = roomy ? ax.n - 2 : ax.n - 1;
        if (q + c.front().first < lo && q + 2 <= hi) return detail::forward2();
        if (q + c.back().first > hi && q - 2 >= lo) return detail::backward2();
        if (q + c.front().first < 0) return detail::forward2();
        if (q + c.back().first > ax.n - 1) return detail::backward2();
    }
    return c;
}

}  // namespace detail

/// Time-marching matrix A = I - dt * sum_axes u_axis * D_axis.
/// Wall nodes become identity rows; periodic axes wrap. One-sided families
/// orient each node's stencil against the local velocity sign.
inline SparseOperator assemble_advection(const Grid2D& grid, const VelocityField& vel,
                                         const StencilSpec& spec_x, const StencilSpec& spec_y,
                                         double dt) {
    if (!vel.grid.same_shape(grid))
        throw std::invalid_argument("assemble_advection: velocity/grid mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_advection: dt must be positive");
    if (!stencil_supported(spec_x) || !stencil_supported(spec_y))
        throw std::invalid_argument("assemble_advection: unsupported stencil");
    const double r = cfl_number(grid, vel, dt);
    if (r > 1.0 + 1e-12)
        throw std::invalid_argument("assemble_advection: CFL violation, r = " + std::to_string(r));
    if (r > 0.5)
        std::cerr << "warning: CFL number r = " << r << " exceeds 0.5\n";

    const detail::AxisView ax{grid.nx, grid.bc_x};
    const detail::AxisView ay{grid.ny, grid.bc_y};

    SparseBuilder b(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int m = grid.index(i, j);
            b.add(m, m, 1.0);
            if (grid.on_wall(i, j)) continue;  // Dirichlet: single entry of 1

            if (vel.u[m] != 0.0 && grid.nx > 1) {
                const int sign = vel.u[m] > 0.0 ? 1 : -1;
                const double scale = -dt * vel.u[m] / grid.dx;
                for (const auto& [off, coeff] : detail::node_stencil(spec_x, sign, i, ax)) {
                    int p = i + off;
                    if (ax.bc == Boundary::Periodic) p = (p % ax.n + ax.n) % ax.n;
                    b.add(m, grid.index(p, j), scale * coeff);
                }
            }
            if (grid.ny > 1 && vel.v[m] != 0.0) {
                const int sign = vel.v[m] > 0.0 ? 1 : -1;
                const double scale = -dt * vel.v[m] / grid.dy;
                for (const auto& [off, coeff] : detail::node_stencil(spec_y, sign, j, ay)) {
                    int p = j + off;
                    if (ay.bc == Boundary::Periodic) p = (p % ay.n + ay.n) % ay.n;
                    b.add(m, grid.index(i, p), scale * coeff);
                }
            }
        }
    }
    return b.build();
}

inline SparseOperator assemble_advection(const Grid2D& grid, const VelocityField& vel,
                                         const StencilSpec& spec, double dt) {
    return assemble_advection(grid, vel, spec, spec, dt);
}

/// Heat-equation Euler step matrix: circulant tridiagonal [r_h, 1-2r_h, r_h].
inline SparseOperator assemble_heat_1d(int n, double r_h) {
    if (n < 4) throw std::invalid_argument("assemble_heat_1d: n must be at least 4");
    if (!(r_h > 0.0) || r_h > 0.5)
        throw std::invalid_argument("assemble_heat_1d: r_h must lie in (0, 0.5]");
    SparseBuilder b(n);
    for (int m = 0; m < n; ++m) {
        b.add(m, m, 1.0 - 2.0 * r_h);
        b.add(m, (m + 1) % n, r_h);
        b.add(m, (m + n - 1) % n, r_h);
    }
    return b.build();
}

}  // namespace qadv
