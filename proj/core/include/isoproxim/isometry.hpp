#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "isoproxim/gauge.hpp"
#include "isoproxim/matrix.hpp"
#include "isoproxim/svd.hpp"
#include "isoproxim/tolerances.hpp"

namespace isoproxim {

/// Status of the minimizer set returned by nearest_rank_k.
///
/// For a strictly convex gauge the set below is complete, so "unique" is a
/// proof of uniqueness. For other gauges additional minimizers outside the
/// described family can exist, and the certificate says so.
enum class Certificate {
    UniqueStrictlyConvex,
    NonUniqueMultiplicity,
    NonUniqueRankExcess,
    UnknownGaugeNotStrictlyConvex,
};

const char* to_string(Certificate c) noexcept;

/// The single minimizer (prescribed rank below the matrix rank with a
/// singular-value gap at the cut, or exactly at the matrix rank).
struct UniqueMinimizer {
    Matrix matrix;
};

/// Minimizers when the cut falls inside a cluster of equal singular
/// values: V blockdiag(I_{l_k}, P, 0) W* over rank-`proj_rank` orthogonal
/// projections P of size e_k.
struct ProjectionFamily {
    Matrix V; // m x m unitary
    Matrix W; // n x n unitary
    std::size_t l_k = 0;       // singular values strictly above the cut
    std::size_t e_k = 0;       // size of the cluster at the cut
    std::size_t proj_rank = 0; // k - l_k
};

/// Minimizers when the requested rank exceeds the matrix rank:
/// V blockdiag(I_r, S) W* over rank-`iso_rank` partial isometries S of
/// shape (m - r) x (n - r).
struct IsometryFamily {
    Matrix V;
    Matrix W;
    std::size_t rank_f = 0;   // r = rank of the input
    std::size_t iso_rank = 0; // k - r
};

using MinimizerSet = std::variant<UniqueMinimizer, ProjectionFamily, IsometryFamily>;

/// Nearest partial isometry of prescribed rank, together with the complete
/// minimizer family (complete for strictly convex gauges) and a
/// uniqueness certificate.
struct RankKResult {
    std::size_t k = 0;
    Matrix minimizer; // the canonical representative U_k
    double distance = 0.0;
    Gauge gauge = Gauge::frobenius();
    MinimizerSet family;
    Certificate certificate = Certificate::UnknownGaugeNotStrictlyConvex;
};

/// Solves min ||F - X|| over partial isometries X of rank k, 1 <= k <= q.
RankKResult nearest_rank_k(const Matrix& f, std::size_t k, const Gauge& gauge,
                           const Tolerances& tol = {});

/// Same optimum without constructing minimizers: the gauge evaluated on
/// (|s_1 - 1|, ..., |s_k - 1|, s_{k+1}, ..., s_q).
double dist_rank_k(const Matrix& f, std::size_t k, const Gauge& gauge,
                   const Tolerances& tol = {});

/// Instantiates one member of a minimizer family. `param` must be a
/// projection of rank proj_rank (ProjectionFamily) or a partial isometry
/// of rank iso_rank and shape (m-r) x (n-r) (IsometryFamily); it is
/// ignored for a unique set.
Matrix sample_minimizer(const MinimizerSet& set, const Matrix& param,
                        const Tolerances& tol = {});

/// Result of the rank-free problem: all ranks k in 1..r attaining the
/// minimum over the rank components, merged in increasing k.
struct GlobalResult {
    std::vector<std::size_t> best_ranks;
    std::vector<RankKResult> results;
    double distance = 0.0;
};

/// Nearest partial isometry over all ranks. Ranks above rank(F) are never
/// competitive and are skipped. Throws ZeroMatrixError for F = 0.
GlobalResult nearest_global(const Matrix& f, const Gauge& gauge,
                            const Tolerances& tol = {});

} // namespace isoproxim
