#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "logcone/spectra.hpp"

namespace logcone {

using Rng = std::mt19937_64;

Matrix random_orthogonal(Rng& rng, std::size_t d);

/// Q diag(λ) Qᵀ with λ uniform in [lo, hi] and Q Haar-random.
CovMatrix random_spd(Rng& rng, std::size_t d, double lo, double hi);

/// 2..20 PSD parts summing to Id. Alternates between blends of an
/// orthonormal frame (weights per frame vector spread over the parts, some
/// nearly concentrated so every branch of split_covariance is reached) and
/// whitened groups of random rank-1 projectors.
std::vector<CovMatrix> random_identity_decomposition(Rng& rng, std::size_t d, double eps);

struct SuiteReport {
    std::size_t trials = 0;
    std::size_t violations = 0;   // contract failures
    std::map<std::string, std::size_t> outcomes;
    double seconds = 0.0;
    std::string first_failure;
};

/// min_eig >= lo - 1e-9 and max_eig <= hi + 1e-9 for random G1, G2 with
/// spectra in [lo, hi] and random diagonal W, V = sqrt(1 - W²).
SuiteReport addsections_suite(std::size_t d, std::size_t trials, std::uint64_t seed,
                              double lo = 0.3, double hi = 2.0);

/// split_covariance + verify_split on random identity decompositions.
SuiteReport split_suite(std::size_t d, std::size_t trials, double eps, std::uint64_t seed);

}  // namespace logcone
