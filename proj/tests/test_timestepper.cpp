#include "qadv/analysis.hpp"
#include "qadv/assemble.hpp"
#include "qadv/embedding.hpp"
#include "qadv/timestepper.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <numbers>
#include <sstream>

using namespace qadv;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

struct Setup {
    Grid2D grid;
    Statevector sv;
    SparseOperator op;
};

Setup circulant_setup(int n, double r) {
    Setup s;
    s.grid = make_grid(n, 1, Boundary::Periodic, Boundary::Periodic);
    const VelocityField vel(s.grid, Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n));
    s.op = assemble_advection(s.grid, vel, {StencilFamily::Central, 2}, r * s.grid.dx);
    s.sv = to_statevector(init_sine(s.grid, Axis::X));
    return s;
}

}  // namespace

TEST_CASE("identity operator always succeeds") {
    const Setup s = circulant_setup(8, 0.1);  // only the grid and state are used here
    const HermitianEmbedding emb(sparse_identity(8), pi / 2, Backend::DenseSvd);
    Rng rng(1);
    auto [next, out] = step(s.sv, emb, rng, StepMode::Sampled);
    CHECK(out.success);
    CHECK(out.p_success == Approx(1.0).margin(1e-12));
    CHECK((next.amplitudes - s.sv.amplitudes).cwiseAbs().maxCoeff() <= 1e-12);

    // a full run of one target leaves the state unchanged up to normalization
    Rng rng2(2);
    const RunLog log = run(s.sv, emb, 1, rng2, {0, 1}, StepMode::Sampled, s.grid);
    CHECK(log.n_success == 1);
    CHECK(log.n_fail == 0);
    CHECK((log.final_state.amplitudes - s.sv.amplitudes).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(log.snapshots.count(0) == 1);
    CHECK(log.snapshots.count(1) == 1);
}

TEST_CASE("state stays unit norm through steps") {
    const Setup s = circulant_setup(16, 0.2);
    const HermitianEmbedding emb(s.op, pi / 4, Backend::DenseSvd);
    Rng rng(3);
    Statevector state = s.sv;
    for (int k = 0; k < 50; ++k) {
        auto [next, out] = step(state, emb, rng, StepMode::Sampled);
        state = std::move(next);
        CHECK(std::abs(state.norm() - 1.0) <= 1e-12);
        CHECK(out.p_success >= 0.0);
        CHECK(out.p_success <= 1.0);
    }
}

TEST_CASE("forced trajectories ignore the rng") {
    const Setup s = circulant_setup(16, 0.2);
    const HermitianEmbedding emb(s.op, pi / 4, Backend::DenseSvd);
    Rng a(111), b(999);
    const RunLog la = run(s.sv, emb, 20, a, {}, StepMode::ForcedSuccess, s.grid);
    const RunLog lb = run(s.sv, emb, 20, b, {}, StepMode::ForcedSuccess, s.grid);
    CHECK(la.n_fail == 0);
    CHECK((la.final_state.amplitudes - lb.final_state.amplitudes).cwiseAbs().maxCoeff() == 0.0);
    // seeds recorded
    CHECK(la.seed == 111);
    CHECK(lb.seed == 999);
}

TEST_CASE("forced success fails when the branch vanishes") {
    SparseBuilder b(4);
    b.add(0, 0, 0.0);
    const HermitianEmbedding emb(b.build(), pi / 2, Backend::DenseSvd);  // A = 0
    Statevector sv;
    sv.amplitudes = Eigen::VectorXcd::Zero(4);
    sv.amplitudes[0] = 1.0;
    Rng rng(4);
    CHECK_THROWS_AS(step(sv, emb, rng, StepMode::ForcedSuccess), std::runtime_error);
    // the failure branch is fine and acts as the identity
    auto [next, out] = step(sv, emb, rng, StepMode::ForcedFailure);
    CHECK_FALSE(out.success);
    CHECK((next.amplitudes - sv.amplitudes).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("attempt budget") {
    SparseBuilder b(4);
    b.add(0, 0, 0.0);
    const HermitianEmbedding emb(b.build(), pi / 2, Backend::DenseSvd);  // p_success = 0
    Statevector sv;
    sv.amplitudes = Eigen::VectorXcd::Zero(4);
    sv.amplitudes[0] = 1.0;
    Rng rng(5);
    CHECK_THROWS_AS(run(sv, emb, 1, rng, {}, StepMode::Sampled, make_grid(4, 1, Boundary::Periodic, Boundary::Periodic)),
                    std::runtime_error);
}

TEST_CASE("failure branch is near identity away from theta = pi/2") {
    const Setup s = circulant_setup(64, 0.25);
    for (double theta : {pi / 4, pi / 8}) {
        const HermitianEmbedding emb(s.op, theta, Backend::DenseSvd);
        Rng rng(6);
        Statevector state = s.sv;
        for (int k = 0; k < 5; ++k) {
            auto [next, out] = step(state, emb, rng, StepMode::ForcedFailure);
            state = std::move(next);
            CHECK_FALSE(out.success);
        }
        const double fidelity =
            std::abs((s.sv.amplitudes.adjoint() * state.amplitudes)(0, 0));
        CHECK(fidelity >= 1.0 - 10.0 * e_i_norm(0.25, theta));
        CHECK(fidelity >= 1.0 - 2.0 * e_i_norm(0.25, theta));  // even per-sequence it holds
    }
}

TEST_CASE("sampled frequency tracks the recorded probability") {
    const Setup s = circulant_setup(32, 0.2);
    const HermitianEmbedding emb(s.op, pi / 4, Backend::DenseSvd);
    Rng rng(7);
    const long target = 1300;
    const RunLog log = run(s.sv, emb, target, rng, {}, StepMode::Sampled, s.grid, 100000);
    const long n = log.attempts();
    CHECK(n >= 2000);
    const double freq = static_cast<double>(log.n_success) / static_cast<double>(n);
    const double pbar = log.mean_p_success();
    const double sigma = std::sqrt(pbar * (1.0 - pbar) / static_cast<double>(n));
    CHECK(std::abs(freq - pbar) <= 3.0 * sigma);
    CHECK(pbar == Approx(0.5).margin(0.01));  // sin^2(pi/4)
}

TEST_CASE("snapshots land on the schedule") {
    const Setup s = circulant_setup(16, 0.1);
    const HermitianEmbedding emb(s.op, pi / 2, Backend::DenseSvd);
    Rng rng(8);
    const RunLog log = run(s.sv, emb, 9, rng, {0, 3, 7, 9}, StepMode::ForcedSuccess, s.grid);
    CHECK(log.snapshots.size() == 4);
    CHECK(log.snapshots.count(3) == 1);
    CHECK(log.snapshots.count(7) == 1);
    const ScalarField& snap0 = log.snapshots.at(0);
    CHECK((snap0.values - s.sv.amplitudes.real()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run log csv") {
    const Setup s = circulant_setup(16, 0.1);
    const HermitianEmbedding emb(s.op, pi / 2, Backend::DenseSvd);
    Rng rng(9);
    const RunLog log = run(s.sv, emb, 3, rng, {}, StepMode::ForcedSuccess, s.grid);
    const auto path = std::filesystem::temp_directory_path() / "qadv_runlog.csv";
    save_run_log_csv(log, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "attempt,success,p_success");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("counters are consistent") {
    const Setup s = circulant_setup(32, 0.25);
    const HermitianEmbedding emb(s.op, pi / 8, Backend::DenseSvd);
    Rng rng(10);
    const RunLog log = run(s.sv, emb, 40, rng, {}, StepMode::Sampled, s.grid, 10000);
    CHECK(log.n_success == 40);
    CHECK(log.attempts() == static_cast<long>(log.outcomes.size()));
    long succ = 0;
    for (const auto& o : log.outcomes) succ += o.success ? 1 : 0;
    CHECK(succ == log.n_success);
}
