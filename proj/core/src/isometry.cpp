#include "isoproxim/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "isoproxim/errors.hpp"

namespace isoproxim {

namespace {

// Evaluation vector of the optimal rank-k distance: the first k singular
// values move to 1, the rest stay. Its nonincreasing rearrangement is the
// spectrum of F - U_k.
std::vector<double> distance_vector(const std::vector<double>& sigma, std::size_t k) {
    std::vector<double> out(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        out[i] = i < k ? std::abs(sigma[i] - 1.0) : sigma[i];
    return out;
}

// Cluster id per index: adjacent singular values within tol_abs of each
// other share a cluster (transitive closure over neighbors in sorted
// order).
std::vector<std::size_t> cluster_ids(const std::vector<double>& sigma, double tol_abs) {
    std::vector<std::size_t> ids(sigma.size(), 0);
    std::size_t current = 0;
    for (std::size_t i = 1; i < sigma.size(); ++i) {
        if (sigma[i - 1] - sigma[i] > tol_abs) ++current;
        ids[i] = current;
    }
    return ids;
}

void validate_rank_request(const Matrix& f, std::size_t k, const char* what) {
    const std::size_t q = std::min(f.rows(), f.cols());
    if (q == 0) throw PreconditionError(std::string(what) + ": empty matrix");
    if (k < 1 || k > q)
        throw PreconditionError(std::string(what) + ": rank " + std::to_string(k) +
                                " outside [1, " + std::to_string(q) + "]");
}

RankKResult result_from_factors(const SvdFactors& factors, std::size_t k, const Gauge& gauge,
                                const Tolerances& tol) {
    RankKResult out;
    out.k = k;
    out.gauge = gauge;
    out.minimizer = factors.rank_k_isometry(k);
    out.distance = gauge_eval(gauge, distance_vector(factors.sigma, k));

    const std::size_t r = factors.rank;
    const double sigma0 = factors.sigma.empty() ? 0.0 : factors.sigma[0];
    const double cluster_tol = tol.cluster_rel * (1.0 + sigma0);

    if (k > r) {
        out.family = IsometryFamily{factors.V, factors.W, r, k - r};
        out.certificate = gauge.strictly_convex() ? Certificate::NonUniqueRankExcess
                                                  : Certificate::UnknownGaugeNotStrictlyConvex;
        return out;
    }
    if (k == r) {
        out.family = UniqueMinimizer{out.minimizer};
        out.certificate = gauge.strictly_convex() ? Certificate::UniqueStrictlyConvex
                                                  : Certificate::UnknownGaugeNotStrictlyConvex;
        return out;
    }

    // k < r: uniqueness is decided by the gap between s_k and s_{k+1}.
    const std::vector<std::size_t> ids = cluster_ids(factors.sigma, cluster_tol);
    if (ids[k - 1] != ids[k]) {
        out.family = UniqueMinimizer{out.minimizer};
        out.certificate = gauge.strictly_convex() ? Certificate::UniqueStrictlyConvex
                                                  : Certificate::UnknownGaugeNotStrictlyConvex;
        return out;
    }
    const std::size_t cut = ids[k - 1];
    std::size_t l_k = 0;
    while (l_k < factors.sigma.size() && ids[l_k] != cut) ++l_k;
    std::size_t e_k = 0;
    for (std::size_t id : ids)
        if (id == cut) ++e_k;
    out.family = ProjectionFamily{factors.V, factors.W, l_k, e_k, k - l_k};
    out.certificate = gauge.strictly_convex() ? Certificate::NonUniqueMultiplicity
                                              : Certificate::UnknownGaugeNotStrictlyConvex;
    return out;
}

} // namespace

const char* to_string(Certificate c) noexcept {
    switch (c) {
        case Certificate::UniqueStrictlyConvex: return "unique-strictly-convex";
        case Certificate::NonUniqueMultiplicity: return "non-unique-multiplicity";
        case Certificate::NonUniqueRankExcess: return "non-unique-rank-excess";
        case Certificate::UnknownGaugeNotStrictlyConvex:
            return "unknown-gauge-not-strictly-convex";
    }
    return "unknown";
}

RankKResult nearest_rank_k(const Matrix& f, std::size_t k, const Gauge& gauge,
                           const Tolerances& tol) {
    validate_rank_request(f, k, "nearest_rank_k");
    const SvdFactors factors = svd(f, tol);
    return result_from_factors(factors, k, gauge, tol);
}

double dist_rank_k(const Matrix& f, std::size_t k, const Gauge& gauge, const Tolerances& tol) {
    validate_rank_request(f, k, "dist_rank_k");
    tol.validate();
    require_finite(f, "dist_rank_k");
    const std::vector<double> sigma = singular_values(f);
    return gauge_eval(gauge, distance_vector(sigma, k));
}

Matrix sample_minimizer(const MinimizerSet& set, const Matrix& param, const Tolerances& tol) {
    tol.validate();
    if (const auto* unique = std::get_if<UniqueMinimizer>(&set)) return unique->matrix;

    if (const auto* family = std::get_if<ProjectionFamily>(&set)) {
        const std::size_t e = family->e_k;
        if (param.rows() != e || param.cols() != e)
            throw PreconditionError("sample_minimizer: projection parameter must be " +
                                    std::to_string(e) + " x " + std::to_string(e));
        require_finite(param, "sample_minimizer");
        const Matrix sq = param * param;
        double herm = 0.0;
        double idem = 0.0;
        for (std::size_t i = 0; i < e; ++i)
            for (std::size_t j = 0; j < e; ++j) {
                herm = std::max(herm, std::abs(std::conj(param(j, i)) - param(i, j)));
                idem = std::max(idem, std::abs(sq(i, j) - param(i, j)));
            }
        if (herm > tol.iso || idem > tol.iso)
            throw PreconditionError("sample_minimizer: parameter is not an orthogonal projection");
        const double tr = std::real(param.trace());
        if (std::abs(tr - static_cast<double>(family->proj_rank)) >
            tol.iso * static_cast<double>(std::max<std::size_t>(e, 1)))
            throw PreconditionError("sample_minimizer: projection rank must be " +
                                    std::to_string(family->proj_rank));

        // V blockdiag(I_l, P, 0) W*
        const std::size_t m = family->V.rows();
        const std::size_t n = family->W.rows();
        Matrix core(m, n);
        for (std::size_t i = 0; i < family->l_k; ++i) core(i, i) = Complex{1.0, 0.0};
        for (std::size_t i = 0; i < e; ++i)
            for (std::size_t j = 0; j < e; ++j)
                core(family->l_k + i, family->l_k + j) = param(i, j);
        return family->V * (core * family->W.adjoint());
    }

    const auto& family = std::get<IsometryFamily>(set);
    const std::size_t m = family.V.rows();
    const std::size_t n = family.W.rows();
    const std::size_t r = family.rank_f;
    if (param.rows() != m - r || param.cols() != n - r)
        throw PreconditionError("sample_minimizer: isometry parameter must be " +
                                std::to_string(m - r) + " x " + std::to_string(n - r));
    require_finite(param, "sample_minimizer");
    const PartialIsometryCheck check = is_partial_isometry(param, tol);
    if (!check.is_partial_isometry || check.rank != family.iso_rank)
        throw PreconditionError("sample_minimizer: parameter must be a partial isometry of rank " +
                                std::to_string(family.iso_rank));

    Matrix core(m, n);
    for (std::size_t i = 0; i < r; ++i) core(i, i) = Complex{1.0, 0.0};
    for (std::size_t i = 0; i < m - r; ++i)
        for (std::size_t j = 0; j < n - r; ++j) core(r + i, r + j) = param(i, j);
    return family.V * (core * family.W.adjoint());
}

GlobalResult nearest_global(const Matrix& f, const Gauge& gauge, const Tolerances& tol) {
    if (f.rows() == 0 || f.cols() == 0) throw PreconditionError("nearest_global: empty matrix");
    require_finite(f, "nearest_global");
    tol.validate();

    const SvdFactors factors = svd(f, tol);
    if (factors.rank == 0) {
        std::vector<double> unit(factors.q(), 0.0);
        unit[0] = 1.0;
        throw ZeroMatrixError(
            "nearest_global: the zero matrix has no preferred nearest partial isometry; "
            "every rank-1 partial isometry lies at the same distance",
            gauge_eval(gauge, unit));
    }

    const double sigma0 = factors.sigma[0];
    std::vector<double> dist(factors.rank, 0.0);
    double best = 0.0;
    for (std::size_t k = 1; k <= factors.rank; ++k) {
        dist[k - 1] = gauge_eval(gauge, distance_vector(factors.sigma, k));
        if (k == 1 || dist[k - 1] < best) best = dist[k - 1];
    }

    GlobalResult out;
    out.distance = best;
    const double tie = 1e-10 * (1.0 + sigma0);
    for (std::size_t k = 1; k <= factors.rank; ++k) {
        if (dist[k - 1] <= best + tie) {
            out.best_ranks.push_back(k);
            out.results.push_back(result_from_factors(factors, k, gauge, tol));
        }
    }
    return out;
}

} // namespace isoproxim
