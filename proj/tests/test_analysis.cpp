#include "qadv/analysis.hpp"
#include "qadv/assemble.hpp"
#include "qadv/embedding.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace qadv;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("tilde entries, limiting and tabulated values") {
    const TildeEntries z = tilde_entries_4x4(0.0, 1.1);
    CHECK(z.a_d0 == Approx(std::sin(1.1)).margin(1e-15));
    CHECK(z.a_d1 == 0.0);
    CHECK(z.a_dm1 == 0.0);
    CHECK(z.a_d2 == Approx(0.0).margin(1e-15));
    CHECK(z.i_d0 == Approx(std::cos(1.1)).margin(1e-15));
    CHECK(z.i_d2 == Approx(0.0).margin(1e-15));

    const TildeEntries t = tilde_entries_4x4(0.1, pi / 2);
    CHECK(t.a_d1 == Approx(-0.049751).margin(1e-6));
    CHECK(t.a_dm1 == -t.a_d1);

    CHECK_THROWS_AS(tilde_entries_4x4(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tilde_entries_4x4(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("per-step error norms") {
    CHECK(e_a_norm(0.0, 1.2) == Approx(0.0).margin(1e-15));
    CHECK(e_i_norm(0.0, 1.2) == Approx(0.0).margin(1e-15));
    CHECK(e_a_norm(0.4, 1e-9) == Approx(0.0).margin(1e-12));

    CHECK(e_a_norm(0.1, pi / 2) == Approx(0.0025091256).margin(1e-9));
    // full-precision evaluation of the printed formula; tabulations that
    // round the inner angle first land at 0.0039163
    CHECK(e_i_norm(0.1, pi / 2) == Approx(0.0039171821).margin(1e-9));

    // small-r expansion: e_a ~ (r^2/4)(sin t - t cos t)
    for (double theta : {0.4, 1.0, pi / 2}) {
        const double r = 1e-3;
        const double expand = r * r / 4.0 * (std::sin(theta) - theta * std::cos(theta));
        CHECK(e_a_norm(r, theta) == Approx(expand).epsilon(1e-4));
    }

    // monotone nondecreasing in r
    for (double theta : {0.3, 1.0, pi / 2}) {
        double prev_a = 0.0, prev_i = 0.0;
        for (double r = 0.0; r <= 1.0; r += 0.02) {
            CHECK(e_a_norm(r, theta) >= prev_a - 1e-15);
            CHECK(e_i_norm(r, theta) >= prev_i - 1e-15);
            prev_a = e_a_norm(r, theta);
            prev_i = e_i_norm(r, theta);
        }
    }
}

TEST_CASE("minimum success probability") {
    CHECK(p_min(0.1, pi / (1.0 + std::sqrt(1.01))) == Approx(0.999985).margin(1e-6));
    CHECK(p_min(0.3, 1e-9) == Approx(0.0).margin(1e-12));
    CHECK(p_min(0.1, pi / 2) == Approx(0.9999387).margin(1e-7));
    // continuity across the branch point
    for (double r : {0.05, 0.2, 0.7}) {
        const double ts = branch_theta(r);
        CHECK(p_min(r, ts - 1e-12) == Approx(p_min(r, ts + 1e-12)).margin(1e-10));
    }
}

TEST_CASE("advection error bound") {
    CHECK(advection_error_bound(0.1, pi / 2) == Approx(0.02509).margin(5e-5));

    // algebraic identity with the composed form
    for (double r : {0.05, 0.1, 0.3, 0.8}) {
        for (double theta : {0.3, 1.0, branch_theta(r), pi / 2}) {
            const double composed =
                (e_a_norm(r, theta) + (1.0 / p_min(r, theta) - 1.0) * e_i_norm(r, theta)) / r;
            CHECK(advection_error_bound(r, theta) == Approx(composed).margin(1e-12));
        }
    }

    // the two printed branches agree at the branch angle
    for (double r : {0.1, 0.4, 0.9}) {
        const double ts = branch_theta(r);
        const double s = std::sqrt(r * r + 1.0);
        const double ea_part = std::sin(ts) * s - std::sin(ts * s);
        const double gap = std::cos(ts) - std::cos(ts * s);
        const double b1 = (gap * std::pow(std::cos(ts) / std::sin(ts), 2) + ea_part) / (2.0 * r);
        const double b2 =
            (gap * std::pow(std::cos(ts * s) / std::sin(ts * s), 2) + ea_part) / (2.0 * r);
        CHECK(b1 == Approx(b2).margin(1e-10));
    }

    // exact frozen values: the growth in r is linear to ~1.2 percent over a
    // doubling, the residual coming from the r^3 term of the expansion
    CHECK(advection_error_bound(0.1, pi / 2) == Approx(0.025093665).margin(1e-8));
    CHECK(advection_error_bound(0.2, pi / 2) == Approx(0.050794567).margin(1e-8));
    const double ratio = advection_error_bound(0.2, pi / 2) / advection_error_bound(0.1, pi / 2);
    CHECK(ratio == Approx(2.0242).margin(2e-3));

    CHECK_THROWS_AS(advection_error_bound(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(advection_error_bound(1.5, 1.0), std::invalid_argument);
}

TEST_CASE("heat error bound landmarks") {
    CHECK(heat_error_bound(1e-4, pi / 2) == Approx(2.0).epsilon(0.05));
    CHECK(heat_error_bound(1.0 / 3.0, pi / 2) == Approx(6.2).epsilon(0.05));
    CHECK(heat_error_bound(0.2499, pi / 2) > 20.0);
    CHECK(heat_error_bound(0.4999, pi / 2) > 20.0);
    CHECK(std::isinf(heat_error_bound(0.25, pi / 2)));
    CHECK(std::isinf(heat_error_bound(0.5, pi / 2)));

    // continuity at the branch boundary r_h = 1/3
    CHECK(heat_error_bound(1.0 / 3.0 - 1e-9, pi / 2) ==
          Approx(heat_error_bound(1.0 / 3.0 + 1e-9, pi / 2)).margin(1e-5));

    // divergence approaching both poles from below
    double prev = heat_error_bound(0.2, pi / 2);
    for (double rh : {0.22, 0.24, 0.2475, 0.2499}) {
        const double v = heat_error_bound(rh, pi / 2);
        CHECK(v > prev);
        prev = v;
    }
    prev = heat_error_bound(0.45, pi / 2);
    for (double rh : {0.47, 0.49, 0.4975, 0.4999}) {
        const double v = heat_error_bound(rh, pi / 2);
        CHECK(v > prev);
        prev = v;
    }

    CHECK_THROWS_AS(heat_error_bound(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(heat_error_bound(0.6, 1.0), std::invalid_argument);
}

TEST_CASE("channel analytical solution") {
    const Grid2D g = make_grid(64, 64, Boundary::Periodic, Boundary::DirichletWall);
    const VelocityField vel = poiseuille_velocity(g, 1.0);
    const ScalarField init = init_sine(g, Axis::X);
    const double init_norm = init.values.norm();

    const ScalarField ref0 = channel_analytical(g, vel, 0.0, init_norm);
    CHECK((ref0.values - init.values / init_norm).cwiseAbs().maxCoeff() <= 1e-15);

    // wall rows are stationary
    const ScalarField ref = channel_analytical(g, vel, 2.7, init_norm);
    for (int i = 0; i < 64; ++i) {
        CHECK(ref.at(i, 0) == Approx(ref0.at(i, 0)).margin(1e-15));
        CHECK(ref.at(i, 63) == Approx(ref0.at(i, 63)).margin(1e-15));
    }

    // a full traversal at unit velocity reproduces the initial profile
    VelocityField unit(g, Eigen::VectorXd::Ones(g.size()), Eigen::VectorXd::Zero(g.size()));
    const ScalarField wrapped = channel_analytical(g, unit, 1.0, init_norm);
    CHECK((wrapped.values - ref0.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("error metrics") {
    const Grid2D g = make_grid(8, 8, Boundary::Periodic, Boundary::DirichletWall);
    const ScalarField init = init_sine(g, Axis::X);
    const Statevector sv = to_statevector(init);
    const ScalarField ref(g, init.values / init.values.norm());

    CHECK(max_abs_error(sv, ref) <= 1e-12);
    CHECK(mean_abs_error(sv, ref) <= 1e-12);

    // shift one amplitude by a known amount
    Statevector bumped = sv;
    bumped.amplitudes[10] += 0.01;
    const double ref_max = ref.values.maxCoeff();
    CHECK(max_abs_error(bumped, ref) == Approx(100.0 * 0.01 / ref_max).margin(1e-10));
    CHECK(mean_abs_error(bumped, ref) ==
          Approx(100.0 * 0.01 / ref_max / g.size()).margin(1e-10));

    const ScalarField zero(g, Eigen::VectorXd::Zero(g.size()));
    CHECK_THROWS_AS(error_map(sv, zero), std::invalid_argument);
}
