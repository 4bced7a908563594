#pragma once

#include <algorithm>
#include <cstddef>

namespace isoproxim {

/// Numerical thresholds shared by the whole library.
///
/// `rank_rel` scales with the leading singular value; a non-positive value
/// selects the shape-dependent default 1e-10 * max(m, n). The remaining
/// fields are fixed relative (cluster) and absolute (iso, half) tolerances.
struct Tolerances {
    double rank_rel = 0.0;     // rank threshold, relative to sigma[0]; <= 0 means auto
    double cluster_rel = 1e-8; // singular-value equality clustering
    double iso = 1e-8;         // partial-isometry acceptance
    double half = 1e-9;        // detection of singular values equal to 1/2

    double resolved_rank_rel(std::size_t rows, std::size_t cols) const noexcept {
        if (rank_rel > 0.0) return rank_rel;
        return 1e-10 * static_cast<double>(std::max(rows, cols));
    }

    /// Validates that all configured tolerances are in (0, 1).
    void validate() const;
};

} // namespace isoproxim
