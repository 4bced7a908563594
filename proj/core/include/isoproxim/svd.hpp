#pragma once

#include <cstddef>
#include <vector>

#include "isoproxim/matrix.hpp"
#include "isoproxim/tolerances.hpp"

namespace isoproxim {

/// Full singular value decomposition F = V diag(sigma) W* with V (m x m)
/// and W (n x n) unitary and sigma of length q = min(m, n), nonincreasing.
///
/// The factors follow a fixed phase convention (largest-modulus entry of
/// each right-singular vector is real positive, ties to the lowest index),
/// so the decomposition of a given bit pattern is reproducible.
struct SvdFactors {
    Matrix V;
    std::vector<double> sigma;
    Matrix W;
    std::size_t rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t q() const noexcept { return sigma.size(); }

    /// V diag(sigma) W*, mostly useful for residual checks.
    Matrix reconstruct() const;

    /// V [I_k 0; 0 0] W*: the partial isometry spanned by the k leading
    /// singular pairs.
    Matrix rank_k_isometry(std::size_t k) const;
};

/// One-sided Jacobi SVD. Deterministic for a fixed input; throws
/// ConvergenceError (carrying the sweep count) if the rotation sweeps do
/// not settle.
SvdFactors svd(const Matrix& f, const Tolerances& tol = {});

/// Singular values only, nonincreasing, length min(m, n).
std::vector<double> singular_values(const Matrix& f);

struct PolarDecomposition {
    Matrix isometry; // the canonical partial isometry U with ker U = ker F
    Matrix positive; // |F| = (F*F)^(1/2), n x n
};

/// Canonical polar decomposition F = U |F|.
PolarDecomposition canonical_polar(const Matrix& f, const Tolerances& tol = {});

struct PartialIsometryCheck {
    bool is_partial_isometry = false;
    std::size_t rank = 0; // trace of X*X rounded; meaningful when the flag is set
};

/// Tests whether X*X is an orthogonal projection within tol.iso.
PartialIsometryCheck is_partial_isometry(const Matrix& x, const Tolerances& tol = {});

namespace detail {

/// In-place column Jacobi: orthogonalizes the columns of `work` and writes
/// all column norms, sorted nonincreasing, into `out`. No heap allocation
/// beyond resizing `out`. Used where singular values are needed in a hot
/// loop.
void singular_values_inplace(Matrix& work, std::vector<double>& out);

} // namespace detail

} // namespace isoproxim
