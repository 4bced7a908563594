#pragma once

#include <cstddef>
#include <vector>

#include "isoproxim/isometry.hpp"
#include "isoproxim/matrix.hpp"
#include "isoproxim/tolerances.hpp"

namespace isoproxim {

/// An ordered finite frame: n vectors in C^m, repetitions allowed, with at
/// least one nonzero vector. Stored through its synthesis matrix (the
/// m x n matrix whose j-th column is the j-th vector).
class Frame {
public:
    static Frame from_vectors(const std::vector<std::vector<Complex>>& vectors);
    static Frame from_synthesis(Matrix synthesis);

    const Matrix& synthesis() const noexcept { return synthesis_; }
    std::size_t ambient_dim() const noexcept { return synthesis_.rows(); }
    std::size_t size() const noexcept { return synthesis_.cols(); }

    std::vector<Complex> vector(std::size_t j) const;

private:
    explicit Frame(Matrix synthesis) : synthesis_(std::move(synthesis)) {}
    Matrix synthesis_;
};

struct FrameReport {
    std::size_t excess = 0;    // n - dim span
    double lower_bound = 0.0;  // optimal A on the span
    double upper_bound = 0.0;  // optimal B
    bool is_parseval = false;
    bool is_tight = false;
    std::size_t span_dim = 0;
};

/// Frame bounds, excess and Parseval/tightness flags.
FrameReport analyze(const Frame& frame, const Tolerances& tol = {});

/// Closest Parseval frame with prescribed excess n - k (Frobenius
/// distance), with the uniqueness certificate and minimizer family of the
/// underlying rank-k problem.
struct FixedExcessResult {
    Frame frame;
    std::size_t k = 0;
    Certificate certificate = Certificate::UnknownGaugeNotStrictlyConvex;
    MinimizerSet family;
};

FixedExcessResult symmetric_approx_fixed_excess(const Frame& frame, std::size_t k,
                                                const Tolerances& tol = {});

/// Closest Parseval frame over all excesses. The rank is chosen by the
/// 1/2-threshold rule on the singular values (closed inequality; any
/// singular value within tol.half of 1/2 flags the result non-unique).
struct GlobalFrameResult {
    Frame frame;
    std::size_t k = 0;
    Certificate certificate = Certificate::UnknownGaugeNotStrictlyConvex;
    bool unique = false;
    bool half_tie = false; // some singular value sits at 1/2 within tol.half
};

GlobalFrameResult symmetric_approx_global(const Frame& frame, const Tolerances& tol = {});

/// Closest Parseval frame whose vectors lie in the subspace spanned by the
/// columns of `subspace_basis` (orthonormalized internally). Throws
/// SubspaceError when the frame span is orthogonal to the subspace.
GlobalFrameResult symmetric_approx_subspace(const Frame& frame, const Matrix& subspace_basis,
                                            const Tolerances& tol = {});

} // namespace isoproxim
