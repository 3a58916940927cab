#pragma once

#include "qadv/embedding.hpp"
#include "qadv/grid.hpp"
#include "qadv/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace qadv {

enum class StepMode { Sampled, ForcedSuccess, ForcedFailure };

struct StepOutcome {
    long attempt = 0;
    bool success = false;
    double p_success = 0.0;
    double post_norm = 0.0;
};

/// Trace of a postselected time-marching run.
struct RunLog {
    long n_success = 0;
    long n_fail = 0;
    std::vector<StepOutcome> outcomes;
    std::map<long, ScalarField> snapshots;  // keyed by success count
    Statevector final_state;
    std::uint64_t seed = 0;

    long attempts() const { return n_success + n_fail; }

    double mean_p_success() const {
        if (outcomes.empty()) return 0.0;
        double s = 0.0;
        for (const auto& o : outcomes) s += o.p_success;
        return s / static_cast<double>(outcomes.size());
    }
};

/// One attempted step. Sampled mode draws the branch from the ancilla
/// statistics; the forced modes pick a branch deterministically (consuming no
/// randomness) while still recording the true success probability.
inline std::pair<Statevector, StepOutcome> step(const Statevector& state,
                                                const HermitianEmbedding& emb, Rng& rng,
                                                StepMode mode) {
    const StepResult res = emb.apply_step(state);
    const double p = std::clamp(res.p_success, 0.0, 1.0);

    StepOutcome out;
    out.p_success = p;
    switch (mode) {
        case StepMode::Sampled:
            out.success = rng.uniform() < p;
            break;
        case StepMode::ForcedSuccess:
            if (p < 1e-15)
                throw std::runtime_error("step: success branch vanished (p < 1e-15)");
            out.success = true;
            break;
        case StepMode::ForcedFailure:
            if (res.bottom.squaredNorm() < 1e-15)
                throw std::runtime_error("step: failure branch vanished");
            out.success = false;
            break;
    }

    const Eigen::VectorXcd& branch = out.success ? res.top : res.bottom;
    const double nrm = branch.norm();
    Statevector next;
    next.amplitudes = branch / nrm;
    next.source_norm = state.source_norm;
    out.post_norm = next.amplitudes.norm();
    return {std::move(next), out};
}

using RunObserver = std::function<void(long success_count, const Statevector& state)>;

/// Repeats step() until target_successes successes. Failures reuse the
/// post-failure state. Snapshots are recorded at the scheduled success
/// counts; the observer fires at success count 0 and after every success.
inline RunLog run(const Statevector& initial, const HermitianEmbedding& emb,
                  long target_successes, Rng& rng, std::vector<long> snapshot_schedule,
                  StepMode mode, const Grid2D& snapshot_grid, long attempt_budget = 0,
                  const RunObserver& observer = {}) {
    if (target_successes < 1)
        throw std::invalid_argument("run: target_successes must be at least 1");
    if (attempt_budget <= 0) attempt_budget = 100 * target_successes;

    std::sort(snapshot_schedule.begin(), snapshot_schedule.end());
    snapshot_schedule.erase(std::unique(snapshot_schedule.begin(), snapshot_schedule.end()),
                            snapshot_schedule.end());
    const auto scheduled = [&](long s) {
        return std::binary_search(snapshot_schedule.begin(), snapshot_schedule.end(), s);
    };

    RunLog log;
    log.seed = rng.seed();
    Statevector state = initial;
    if (scheduled(0)) log.snapshots.emplace(0, statevector_to_field(state, snapshot_grid));
    if (observer) observer(0, state);

    while (log.n_success < target_successes) {
        if (log.attempts() >= attempt_budget)
            throw std::runtime_error("run: attempt budget exceeded (" +
                                     std::to_string(attempt_budget) + " attempts, " +
                                     std::to_string(log.n_success) + " successes)");
        auto [next, out] = step(state, emb, rng, mode);
        state = std::move(next);
        out.attempt = log.attempts() + 1;
        if (out.success) {
            ++log.n_success;
            if (scheduled(log.n_success))
                log.snapshots.emplace(log.n_success, statevector_to_field(state, snapshot_grid));
            if (observer) observer(log.n_success, state);
        } else {
            ++log.n_fail;
        }
        log.outcomes.push_back(out);
    }
    log.final_state = std::move(state);
    return log;
}

inline void save_run_log_csv(const RunLog& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "attempt,success,p_success\n";
    out.precision(17);
    for (const auto& o : log.outcomes)
        out << o.attempt << ',' << (o.success ? 1 : 0) << ',' << o.p_success << '\n';
}

}  // namespace qadv
