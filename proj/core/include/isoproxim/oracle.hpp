#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isoproxim/gauge.hpp"
#include "isoproxim/matrix.hpp"
#include "isoproxim/tolerances.hpp"

namespace isoproxim::oracle {

/// One candidate in the discrete surrogate problem: minimize
/// sum_j (s_j - x_j)^2 over x in {-1, 0, 1}^q with a prescribed support
/// size.
struct SignSupportAssignment {
    std::vector<int> x;
    std::size_t support_size = 0;
    double objective = 0.0;
};

/// Exhaustively enumerates all global minimizers (ties within 1e-12) of
/// the sign/support problem for a nonincreasing nonnegative s. Refuses
/// q > 20. Deterministic order: supports lexicographic, signs by binary
/// counting with 0 -> +1.
std::vector<SignSupportAssignment> sign_support_minimizers(std::span<const double> s,
                                                           std::size_t k);

/// Closed-form count of those minimizers (exact comparisons on s):
/// 1 below the rank with a gap at the cut, binom(e_k, k - l_k) inside a
/// cluster, 1 at the rank, 2^(k-r) * binom(q-r, k-r) above it.
std::uint64_t sign_support_minimizer_count(std::span<const double> s, std::size_t k);

struct ExhaustiveResult {
    Matrix best;
    double distance = 0.0;
};

/// Brute-force reference for the rank-k problem on matrices with
/// m, n <= 3: rank-k partial isometries A [I_k 0; 0 0] B* are searched
/// over a deterministic lattice of Givens-angle/phase parametrized
/// unitaries A, B of size resolution^2, and the best cells are polished
/// by per-angle coordinate descent (golden-section line searches) until
/// the objective improves by less than 1e-10 per sweep.
///
/// The returned distance is always an upper bound on the true optimum and
/// converges to it as the resolution grows.
ExhaustiveResult exhaustive_nearest(const Matrix& f, std::size_t k, const Gauge& gauge,
                                    int resolution);

struct LidskiiCheck {
    bool equality_holds = false;    // s(F-G) matches |s(F) - s(G)| rearranged
    bool commutation_holds = false; // GF* = FG* and G*F = F*G
};

/// Equality case of the singular-value Lidskii bound: when the difference
/// spectrum is exactly |s(F) - s(G)| the pair must satisfy the two
/// commutation relations. Both sides are evaluated independently so the
/// implication can be tested.
LidskiiCheck lidskii_equality_check(const Matrix& f, const Matrix& g,
                                    const Tolerances& tol = {});

struct VerifyOptions {
    std::size_t trials = 20;
    int resolution = 12;
    Gauge gauge = Gauge::frobenius();
    std::uint64_t seed = 1;
    Tolerances tol{};
};

struct VerifyViolation {
    std::size_t trial = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t k = 0;
    double solver_distance = 0.0;
    double oracle_distance = 0.0;
};

struct VerifyReport {
    std::size_t trials = 0;
    int resolution = 0;
    std::string gauge;
    std::uint64_t seed = 0;
    double max_gap = 0.0; // max |solver - oracle| over all checks
    std::vector<VerifyViolation> violations;
};

/// Randomized cross-check of the solver against the brute-force search on
/// small instances. A violation is a solver distance exceeding the oracle
/// distance beyond tolerance (1e-6 for strictly convex gauges, 1e-4
/// otherwise, matching the slower refinement of flat minima).
VerifyReport run_verification(const VerifyOptions& options);

} // namespace isoproxim::oracle
