#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qadv {

/// Boundary treatment of one grid axis.
enum class Boundary {
    Periodic,      ///< n nodes over [0,1), spacing 1/n, first and last node adjacent
    DirichletWall  ///< n nodes over [0,1], spacing 1/(n-1), wall values held fixed
};

/// Uniform Cartesian grid. ny == 1 describes a one-dimensional grid.
struct Grid2D {
    int nx = 0;
    int ny = 1;
    Boundary bc_x = Boundary::Periodic;
    Boundary bc_y = Boundary::Periodic;
    double dx = 0.0;
    double dy = 0.0;

    int size() const { return nx * ny; }

    /// Number of active axes (node count above one).
    int dims() const { return (nx > 1 ? 1 : 0) + (ny > 1 ? 1 : 0); }

    /// Row-major flattening, x fastest.
    int index(int i, int j) const { return i + nx * j; }

    double x(int i) const { return i * dx; }
    double y(int j) const { return j * dy; }

    /// Smallest spacing among active axes; used for the CFL constraint.
    double min_spacing() const {
        if (ny <= 1) return dx;
        return std::min(dx, dy);
    }

    bool same_shape(const Grid2D& o) const { return nx == o.nx && ny == o.ny; }

    bool on_wall(int i, int j) const {
        if (bc_x == Boundary::DirichletWall && (i == 0 || i == nx - 1)) return true;
        if (ny > 1 && bc_y == Boundary::DirichletWall && (j == 0 || j == ny - 1)) return true;
        return false;
    }
};

inline double axis_spacing(int n, Boundary bc) {
    return bc == Boundary::Periodic ? 1.0 / n : 1.0 / (n - 1);
}

inline Grid2D make_grid(int nx, int ny, Boundary bc_x, Boundary bc_y) {
    if (nx < 4) throw std::invalid_argument("make_grid: nx must be at least 4");
    if (ny != 1 && ny < 4) throw std::invalid_argument("make_grid: ny must be 1 or at least 4");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.bc_x = bc_x;
    g.bc_y = bc_y;
    g.dx = axis_spacing(nx, bc_x);
    g.dy = ny > 1 ? axis_spacing(ny, bc_y) : 0.0;
    return g;
}

/// Real nodal values over a grid, flattened row-major (x fastest).
struct ScalarField {
    Grid2D grid;
    Eigen::VectorXd values;

    ScalarField() = default;
    ScalarField(const Grid2D& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("ScalarField: value count does not match grid");
        if (!values.allFinite())
            throw std::invalid_argument("ScalarField: non-finite value");
    }

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Velocity components over a grid. Convention: components scaled so max |u_j| <= 1.
struct VelocityField {
    Grid2D grid;
    Eigen::VectorXd u;
    Eigen::VectorXd v;

    VelocityField() = default;
    VelocityField(const Grid2D& g, Eigen::VectorXd uu, Eigen::VectorXd vv)
        : grid(g), u(std::move(uu)), v(std::move(vv)) {
        if (u.size() != grid.size() || v.size() != grid.size())
            throw std::invalid_argument("VelocityField: component size does not match grid");
        if (!u.allFinite() || !v.allFinite())
            throw std::invalid_argument("VelocityField: non-finite value");
    }

    double max_component() const {
        return std::max(u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff());
    }
};

/// Plane Poiseuille profile: u(y) = u_max * 4y(1-y), v = 0.
/// The product j*(ny-1-j) makes the profile symmetric about the centreline
/// exactly, not just to rounding.
inline VelocityField poiseuille_velocity(const Grid2D& grid, double u_max) {
    if (grid.ny <= 1 || grid.bc_y != Boundary::DirichletWall)
        throw std::invalid_argument("poiseuille_velocity: grid needs a DirichletWall y axis");
    Eigen::VectorXd u(grid.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
    const double denom = static_cast<double>(grid.ny - 1) * static_cast<double>(grid.ny - 1);
    for (int j = 0; j < grid.ny; ++j) {
        const double prof = u_max * 4.0 * (static_cast<double>(j) * (grid.ny - 1 - j)) / denom;
        for (int i = 0; i < grid.nx; ++i) u[grid.index(i, j)] = prof;
    }
    return VelocityField(grid, std::move(u), std::move(v));
}

enum class Axis { X, Y };

/// phi = sin(2*pi*coord) + 1 along the chosen axis, constant along the other.
inline ScalarField init_sine(const Grid2D& grid, Axis axis) {
    if (axis == Axis::Y && grid.ny <= 1)
        throw std::invalid_argument("init_sine: grid has no y axis");
    Eigen::VectorXd vals(grid.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double c = axis == Axis::X ? grid.x(i) : grid.y(j);
            vals[grid.index(i, j)] = std::sin(two_pi * c) + 1.0;
        }
    return ScalarField(grid, std::move(vals));
}

/// Normalized amplitude vector of power-of-two length.
struct Statevector {
    Eigen::VectorXcd amplitudes;
    /// 2-norm of the source field, recorded for like-for-like comparison
    /// against analytical references.
    double source_norm = 1.0;

    int qubits() const {
        int q = 0;
        for (Eigen::Index n = amplitudes.size(); n > 1; n >>= 1) ++q;
        return q;
    }
    double norm() const { return amplitudes.norm(); }
};

inline Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Embed field values into the first N amplitudes, zero-pad to the next
/// power of two and normalize. The norm used is recorded on the result.
inline Statevector to_statevector(const ScalarField& field) {
    const double nrm = field.values.norm();
    if (nrm == 0.0) throw std::invalid_argument("to_statevector: zero-norm field");
    const Eigen::Index n = field.values.size();
    const Eigen::Index p = next_pow2(n);
    Statevector sv;
    sv.amplitudes = Eigen::VectorXcd::Zero(p);
    sv.amplitudes.head(n) = (field.values / nrm).cast<std::complex<double>>();
    sv.source_norm = nrm;
    return sv;
}

/// First grid.size() amplitudes reinterpreted as a field. Amplitudes must be
/// real to within `imag_tol`.
inline ScalarField statevector_to_field(const Statevector& sv, const Grid2D& grid,
                                        double imag_tol = 1e-9) {
    if (sv.amplitudes.size() < grid.size())
        throw std::invalid_argument("statevector_to_field: amplitude count below grid size");
    const auto head = sv.amplitudes.head(grid.size());
    if (head.imag().cwiseAbs().maxCoeff() > imag_tol)
        throw std::runtime_error("statevector_to_field: amplitudes are not real");
    return ScalarField(grid, head.real());
}

}  // namespace qadv
