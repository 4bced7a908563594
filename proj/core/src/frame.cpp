#include "isoproxim/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "isoproxim/errors.hpp"
#include "isoproxim/svd.hpp"

namespace isoproxim {

namespace {

void validate_synthesis(const Matrix& synthesis) {
    if (synthesis.rows() == 0 || synthesis.cols() == 0)
        throw PreconditionError("frame: needs at least one vector in a nonzero ambient space");
    require_finite(synthesis, "frame");
    bool nonzero = false;
    for (Complex z : synthesis.data())
        if (z != Complex{0.0, 0.0}) nonzero = true;
    if (!nonzero) throw PreconditionError("frame: all vectors are zero");
}

// Rank selection for the global problems: number of singular values
// meeting the 1/2 threshold (closed inequality, tol.half slack), at least
// one. Also reports whether any value sits at the threshold.
struct HalfCount {
    std::size_t k = 1;
    bool tie = false;
};

HalfCount count_above_half(const std::vector<double>& sigma, double eps_half) {
    HalfCount out;
    std::size_t count = 0;
    for (double s : sigma) {
        if (s >= 0.5 - eps_half) ++count;
        if (std::abs(s - 0.5) <= eps_half) out.tie = true;
    }
    out.k = std::max<std::size_t>(count, 1);
    return out;
}

GlobalFrameResult global_from_factors(const SvdFactors& factors, const Tolerances& tol) {
    const HalfCount half = count_above_half(factors.sigma, tol.half);
    // Build the rank-k result directly from the factors so the reported
    // certificate refers to the same decomposition.
    Matrix u = factors.rank_k_isometry(half.k);

    Certificate certificate;
    const double sigma0 = factors.sigma.empty() ? 0.0 : factors.sigma[0];
    const double cluster_tol = tol.cluster_rel * (1.0 + sigma0);
    const std::size_t r = factors.rank;
    const std::size_t k = half.k;
    if (k > r) {
        certificate = Certificate::NonUniqueRankExcess;
    } else if (k == r) {
        certificate = Certificate::UniqueStrictlyConvex;
    } else {
        certificate = factors.sigma[k - 1] - factors.sigma[k] > cluster_tol
                          ? Certificate::UniqueStrictlyConvex
                          : Certificate::NonUniqueMultiplicity;
    }

    GlobalFrameResult out{Frame::from_synthesis(std::move(u)), k, certificate,
                          /*unique=*/false, half.tie};
    out.unique = certificate == Certificate::UniqueStrictlyConvex && !half.tie;
    return out;
}

// Orthonormal basis of the column span of `basis` (modified Gram-Schmidt
// with re-orthogonalization and rank detection).
std::vector<std::vector<Complex>> orthonormal_columns(const Matrix& basis) {
    const std::size_t m = basis.rows();
    std::vector<std::vector<Complex>> q;
    double max_norm = 0.0;
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(basis(i, j));
        max_norm = std::max(max_norm, std::sqrt(nrm));
    }
    const double drop = 1e-10 * (1.0 + max_norm);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        std::vector<Complex> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = basis(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& col : q) {
                Complex proj{0.0, 0.0};
                for (std::size_t i = 0; i < m; ++i) proj += std::conj(col[i]) * v[i];
                for (std::size_t i = 0; i < m; ++i) v[i] -= proj * col[i];
            }
        }
        double nrm = 0.0;
        for (Complex z : v) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm <= drop) continue;
        for (Complex& z : v) z /= nrm;
        q.push_back(std::move(v));
    }
    return q;
}

} // namespace

Frame Frame::from_vectors(const std::vector<std::vector<Complex>>& vectors) {
    if (vectors.empty()) throw PreconditionError("frame: needs at least one vector");
    const std::size_t m = vectors.front().size();
    Matrix synthesis(m, vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != m)
            throw PreconditionError("frame: vectors must share the ambient dimension");
        for (std::size_t i = 0; i < m; ++i) synthesis(i, j) = vectors[j][i];
    }
    validate_synthesis(synthesis);
    return Frame(std::move(synthesis));
}

Frame Frame::from_synthesis(Matrix synthesis) {
    validate_synthesis(synthesis);
    return Frame(std::move(synthesis));
}

std::vector<Complex> Frame::vector(std::size_t j) const {
    std::vector<Complex> out(ambient_dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = synthesis_(i, j);
    return out;
}

FrameReport analyze(const Frame& frame, const Tolerances& tol) {
    const SvdFactors factors = svd(frame.synthesis(), tol);
    if (factors.rank == 0) throw PreconditionError("analyze: frame spans the zero subspace");

    FrameReport out;
    out.span_dim = factors.rank;
    out.excess = frame.size() - factors.rank;
    out.lower_bound = factors.sigma[factors.rank - 1] * factors.sigma[factors.rank - 1];
    out.upper_bound = factors.sigma[0] * factors.sigma[0];
    out.is_parseval = is_partial_isometry(frame.synthesis(), tol).is_partial_isometry;
    out.is_tight = std::abs(out.upper_bound - out.lower_bound) <=
                   tol.cluster_rel * (1.0 + out.upper_bound);
    return out;
}

FixedExcessResult symmetric_approx_fixed_excess(const Frame& frame, std::size_t k,
                                                const Tolerances& tol) {
    RankKResult res = nearest_rank_k(frame.synthesis(), k, Gauge::frobenius(), tol);
    return FixedExcessResult{Frame::from_synthesis(std::move(res.minimizer)), k, res.certificate,
                             std::move(res.family)};
}

GlobalFrameResult symmetric_approx_global(const Frame& frame, const Tolerances& tol) {
    tol.validate();
    const SvdFactors factors = svd(frame.synthesis(), tol);
    if (factors.rank == 0) throw PreconditionError("symmetric_approx_global: zero frame");
    return global_from_factors(factors, tol);
}

GlobalFrameResult symmetric_approx_subspace(const Frame& frame, const Matrix& subspace_basis,
                                            const Tolerances& tol) {
    tol.validate();
    require_finite(subspace_basis, "symmetric_approx_subspace");
    if (subspace_basis.rows() != frame.ambient_dim())
        throw PreconditionError(
            "symmetric_approx_subspace: subspace basis lives in the wrong ambient space");

    const auto q = orthonormal_columns(subspace_basis);
    if (q.empty())
        throw SubspaceError(
            "symmetric_approx_subspace: the subspace basis spans only the zero space; every "
            "Parseval frame inside it is a symmetric approximation");

    // P_S F without forming P_S: project each synthesis column onto span(q).
    const Matrix& f = frame.synthesis();
    const std::size_t m = f.rows();
    Matrix projected(m, f.cols());
    for (std::size_t j = 0; j < f.cols(); ++j) {
        for (const auto& col : q) {
            Complex coeff{0.0, 0.0};
            for (std::size_t i = 0; i < m; ++i) coeff += std::conj(col[i]) * f(i, j);
            for (std::size_t i = 0; i < m; ++i) projected(i, j) += coeff * col[i];
        }
    }

    const SvdFactors factors = svd(projected, tol);
    if (factors.rank == 0)
        throw SubspaceError(
            "symmetric_approx_subspace: the frame span is orthogonal to the subspace; every "
            "Parseval frame inside the subspace is a symmetric approximation");
    return global_from_factors(factors, tol);
}

} // namespace isoproxim
