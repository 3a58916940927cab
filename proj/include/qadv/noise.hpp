#pragma once

#include "qadv/grid.hpp"
#include "qadv/rng.hpp"
#include "qadv/sparse.hpp"

namespace qadv {

/// Adds i.i.d. Gaussian noise with sigma = sigma_fraction * mean(field) to
/// every pre-normalization value. sigma_fraction = 0 is an exact identity
/// (no randomness consumed).
inline ScalarField perturb_state(const ScalarField& field, double sigma_fraction, Rng& rng) {
    if (sigma_fraction < 0.0)
        throw std::invalid_argument("perturb_state: sigma_fraction must be nonnegative");
    if (sigma_fraction == 0.0) return field;
    const double sigma = sigma_fraction * field.values.mean();
    Eigen::VectorXd vals = field.values;
    for (Eigen::Index m = 0; m < vals.size(); ++m) vals[m] += sigma * rng.normal();
    return ScalarField(field.grid, std::move(vals));
}

/// Multiplicative relative noise on every stored entry:
/// a -> a * (1 + N(0, sigma_fraction)). The sparsity pattern is unchanged;
/// identity wall rows are perturbed like any other entry.
inline SparseOperator perturb_matrix(const SparseOperator& a, double sigma_fraction, Rng& rng) {
    if (sigma_fraction < 0.0)
        throw std::invalid_argument("perturb_matrix: sigma_fraction must be nonnegative");
    if (sigma_fraction == 0.0) return a;
    SparseOperator out = a;
    for (double& v : out.val) v *= 1.0 + sigma_fraction * rng.normal();
    return out;
}

}  // namespace qadv
