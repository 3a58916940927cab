#include "qadv/field_io.hpp"
#include "qadv/grid.hpp"
#include "qadv/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qadv;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir() {
    auto p = fs::temp_directory_path() / "qadv_test_io";
    fs::create_directories(p);
    return p;
}
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("make_grid spacing rules") {
    const Grid2D g = make_grid(64, 64, Boundary::Periodic, Boundary::DirichletWall);
    CHECK(g.dx == 1.0 / 64);
    CHECK(g.dy == 1.0 / 63);
    CHECK(g.size() == 4096);
    CHECK(g.dims() == 2);

    const Grid2D g1 = make_grid(8, 1, Boundary::Periodic, Boundary::Periodic);
    CHECK(g1.dx == 1.0 / 8);
    CHECK(g1.dims() == 1);
    CHECK(g1.min_spacing() == 1.0 / 8);

    const Grid2D g2 = make_grid(4, 4, Boundary::Periodic, Boundary::Periodic);
    CHECK(g2.size() == 16);
    CHECK(g2.dx == 0.25);
    CHECK(g2.dy == 0.25);

    CHECK_THROWS_AS(make_grid(3, 4, Boundary::Periodic, Boundary::Periodic), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(8, 2, Boundary::Periodic, Boundary::Periodic), std::invalid_argument);
}

TEST_CASE("poiseuille profile") {
    const Grid2D g = make_grid(8, 65, Boundary::Periodic, Boundary::DirichletWall);
    const VelocityField vel = poiseuille_velocity(g, 1.0);
    CHECK(vel.u[g.index(0, 0)] == 0.0);                    // wall no-slip
    CHECK(vel.u[g.index(3, 32)] == 1.0);                   // centreline maximum
    CHECK(vel.u[g.index(0, 16)] == Catch::Approx(0.75).margin(1e-15));
    CHECK(vel.v.cwiseAbs().maxCoeff() == 0.0);

    const Grid2D g64 = make_grid(8, 64, Boundary::Periodic, Boundary::DirichletWall);
    const VelocityField v64 = poiseuille_velocity(g64, 0.7);
    for (int j = 0; j < 64; ++j)
        CHECK(v64.u[g64.index(0, j)] == v64.u[g64.index(0, 63 - j)]);  // exact symmetry

    const Grid2D bad = make_grid(8, 8, Boundary::Periodic, Boundary::Periodic);
    CHECK_THROWS_AS(poiseuille_velocity(bad, 1.0), std::invalid_argument);
}

TEST_CASE("sine initial condition") {
    const Grid2D g = make_grid(4, 5, Boundary::Periodic, Boundary::DirichletWall);
    const ScalarField fx = init_sine(g, Axis::X);
    CHECK(fx.at(0, 0) == Catch::Approx(1.0).margin(1e-15));   // sin(0)+1
    CHECK(fx.at(1, 2) == Catch::Approx(2.0).margin(1e-15));   // x=0.25
    CHECK(fx.at(1, 0) == fx.at(1, 4));                        // constant along y

    const ScalarField fy = init_sine(g, Axis::Y);
    CHECK(fy.at(2, 3) == Catch::Approx(0.0).margin(1e-15));   // y=0.75
}

TEST_CASE("to_statevector normalization and padding") {
    const Grid2D g = make_grid(4, 1, Boundary::Periodic, Boundary::Periodic);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    const Statevector sv = to_statevector(ScalarField(g, ones));
    CHECK(sv.amplitudes.size() == 4);
    for (int m = 0; m < 4; ++m) CHECK(sv.amplitudes[m].real() == Catch::Approx(0.5).margin(1e-15));
    CHECK(sv.source_norm == 2.0);
    CHECK(sv.qubits() == 2);

    const Grid2D g2 = make_grid(64, 64, Boundary::Periodic, Boundary::DirichletWall);
    const Statevector sv2 = to_statevector(init_sine(g2, Axis::X));
    CHECK(sv2.amplitudes.size() == 4096);
    CHECK(sv2.qubits() == 12);
    CHECK(std::abs(sv2.norm() - 1.0) <= 1e-12);

    // non-power-of-two field pads with exact zeros
    const Grid2D g6 = make_grid(6, 1, Boundary::Periodic, Boundary::Periodic);
    Eigen::VectorXd v6 = Eigen::VectorXd::LinSpaced(6, 1.0, 6.0);
    const Statevector sv6 = to_statevector(ScalarField(g6, v6));
    CHECK(sv6.amplitudes.size() == 8);
    CHECK(sv6.amplitudes[6] == std::complex<double>(0.0, 0.0));
    CHECK(sv6.amplitudes[7] == std::complex<double>(0.0, 0.0));
    CHECK(std::abs(sv6.norm() - 1.0) <= 1e-12);

    Eigen::VectorXd pair(4);
    pair << 3.0, 4.0, 0.0, 0.0;
    const Statevector svp = to_statevector(ScalarField(g, pair));
    CHECK(svp.amplitudes[0].real() == Catch::Approx(0.6).margin(1e-15));
    CHECK(svp.amplitudes[1].real() == Catch::Approx(0.8).margin(1e-15));

    CHECK_THROWS_AS(to_statevector(ScalarField(g, Eigen::VectorXd::Zero(4))),
                    std::invalid_argument);
}

TEST_CASE("random statevectors are unit norm") {
    Rng rng(11);
    const Grid2D g = make_grid(16, 1, Boundary::Periodic, Boundary::Periodic);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(16);
        for (int m = 0; m < 16; ++m) v[m] = rng.normal();
        if (v.norm() == 0.0) continue;
        CHECK(std::abs(to_statevector(ScalarField(g, v)).norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("field csv format and round trip") {
    const auto dir = temp_dir();
    // 2x2 grids are below the operator minimum but fine for I/O
    Grid2D g22;
    g22.nx = 2;
    g22.ny = 2;
    g22.dx = 0.5;
    g22.dy = 0.5;
    Eigen::VectorXd vals(4);
    vals << 1.0, 2.0, 3.0, 4.0;
    save_field_csv(ScalarField(g22, vals), dir / "f.csv");
    CHECK(slurp(dir / "f.csv") == "1,2\n3,4\n");

    const Grid2D g64 = make_grid(64, 64, Boundary::Periodic, Boundary::DirichletWall);
    Rng rng(5);
    Eigen::VectorXd big(g64.size());
    for (int m = 0; m < g64.size(); ++m) big[m] = rng.normal() * std::pow(10.0, rng.normal());
    save_field_csv(ScalarField(g64, big), dir / "big.csv");
    const ScalarField back = load_field_csv(dir / "big.csv", g64);
    for (int m = 0; m < g64.size(); ++m) CHECK(back.values[m] == big[m]);  // exact round trip
}

TEST_CASE("velocity csv loading and errors") {
    const auto dir = temp_dir();
    const Grid2D g = make_grid(64, 64, Boundary::DirichletWall, Boundary::DirichletWall);
    const VelocityField vel = poiseuille_velocity(
        make_grid(64, 64, Boundary::Periodic, Boundary::DirichletWall), 1.0);
    save_field_csv(ScalarField(g, vel.u), dir / "u.csv");
    save_field_csv(ScalarField(g, vel.v), dir / "v.csv");
    const VelocityField in = load_velocity_csv(dir / "u.csv", dir / "v.csv", g);
    CHECK(in.u.size() == 4096);
    CHECK((in.u - vel.u).cwiseAbs().maxCoeff() == 0.0);

    const Grid2D g63 = make_grid(64, 63, Boundary::Periodic, Boundary::DirichletWall);
    CHECK_THROWS_AS(load_field_csv(dir / "u.csv", g63), std::invalid_argument);

    std::ofstream bad(dir / "bad.csv");
    bad << "1,2\n3,oops\n";
    bad.close();
    Grid2D g22;
    g22.nx = 2;
    g22.ny = 2;
    CHECK_THROWS_AS(load_field_csv(dir / "bad.csv", g22), std::invalid_argument);
}

TEST_CASE("pgm writer emits valid P2") {
    const auto dir = temp_dir();
    Grid2D g = make_grid(4, 4, Boundary::Periodic, Boundary::Periodic);
    Eigen::VectorXd vals = Eigen::VectorXd::LinSpaced(16, 0.0, 15.0);
    save_field_pgm(ScalarField(g, vals), dir / "f.pgm");
    const std::string text = slurp(dir / "f.pgm");
    CHECK(text.rfind("P2\n4 4\n255\n", 0) == 0);
    CHECK(fs::exists(dir / "f.pgm.json"));
}
