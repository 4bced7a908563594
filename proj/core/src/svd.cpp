#include "isoproxim/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "isoproxim/errors.hpp"

namespace isoproxim {

namespace {

constexpr std::size_t kMaxSweeps = 64;
constexpr double kOffDiagTol = 1e-15; // relative rotation trigger
constexpr double kTinyGate = 1e-13;   // below this (relative), a column direction is unreliable

// b_p^* b_q over the columns of b.
Complex column_dot(const Matrix& b, std::size_t p, std::size_t q) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < b.rows(); ++i) acc += std::conj(b(i, p)) * b(i, q);
    return acc;
}

// One cyclic pass of column rotations; rot (optional) accumulates the
// right-hand factor so that b_in * rot_total = b_out at every step.
// Columns below col_gate are numerically zero and are left alone, which
// keeps exactly rank-deficient inputs from cycling at the noise floor.
std::size_t jacobi_sweep(Matrix& b, Matrix* rot, double col_gate) {
    const std::size_t n = b.cols();
    const double gate_sq = col_gate * col_gate;
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double app = std::real(column_dot(b, p, p));
            const double aqq = std::real(column_dot(b, q, q));
            if (app <= gate_sq || aqq <= gate_sq) continue;
            const Complex apq = column_dot(b, p, q);
            const double off = std::abs(apq);
            if (off == 0.0 || off <= kOffDiagTol * std::sqrt(app * aqq)) continue;
            ++rotations;

            // Unitary Z with Z* [app apq; conj(apq) aqq] Z diagonal:
            // a real Jacobi rotation after factoring out the phase of apq.
            const Complex phase = apq / off;
            const double tau = (aqq - app) / (2.0 * off);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = c * t;
            const Complex zqp = -s * std::conj(phase);
            const Complex zqq = c * std::conj(phase);

            for (std::size_t i = 0; i < b.rows(); ++i) {
                const Complex bp = b(i, p);
                const Complex bq = b(i, q);
                b(i, p) = c * bp + zqp * bq;
                b(i, q) = s * bp + zqq * bq;
            }
            if (rot) {
                for (std::size_t i = 0; i < rot->rows(); ++i) {
                    const Complex rp = (*rot)(i, p);
                    const Complex rq = (*rot)(i, q);
                    (*rot)(i, p) = c * rp + zqp * rq;
                    (*rot)(i, q) = s * rp + zqq * rq;
                }
            }
        }
    }
    return rotations;
}

void run_jacobi(Matrix& b, Matrix* rot) {
    const double scale = b.frobenius_norm();
    if (scale == 0.0) return;
    const double col_gate = 1e-14 * scale;

    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep)
        if (jacobi_sweep(b, rot, col_gate) == 0) return;

    // Budget exhausted: accept when the remaining coupling between live
    // columns is at rounding level, otherwise report the failure.
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < b.cols(); ++p) {
        for (std::size_t q = p + 1; q < b.cols(); ++q) {
            const double app = std::real(column_dot(b, p, p));
            const double aqq = std::real(column_dot(b, q, q));
            if (app <= col_gate * col_gate || aqq <= col_gate * col_gate) continue;
            worst = std::max(worst, std::abs(column_dot(b, p, q)) / std::sqrt(app * aqq));
        }
    }
    if (worst > 1e-12)
        throw ConvergenceError("svd: column rotations did not settle after " +
                                   std::to_string(kMaxSweeps) + " sweeps",
                               kMaxSweeps);
}

// Greedy extension of the first `filled` orthonormal columns of u to a full
// unitary: repeatedly take the canonical basis vector with the largest
// residual (lowest index on ties), re-orthogonalized twice.
void complete_basis(Matrix& u, std::size_t filled) {
    const std::size_t m = u.rows();
    std::vector<Complex> v(m);
    std::vector<Complex> best(m);
    for (std::size_t col = filled; col < m; ++col) {
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::fill(v.begin(), v.end(), Complex{0.0, 0.0});
            v[cand] = Complex{1.0, 0.0};
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < col; ++j) {
                    Complex proj{0.0, 0.0};
                    for (std::size_t i = 0; i < m; ++i) proj += std::conj(u(i, j)) * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= proj * u(i, j);
                }
            }
            double nrm = 0.0;
            for (Complex z : v) nrm += std::norm(z);
            nrm = std::sqrt(nrm);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = v;
            }
        }
        for (std::size_t i = 0; i < m; ++i) u(i, col) = best[i] / best_norm;
    }
}

// Fixed phase convention: the largest-modulus entry of every column of w
// becomes real positive (ties to the lowest index). Columns of v paired
// with a nonzero singular value co-rotate to preserve the product; the
// remaining v columns are normalized the same way on their own.
void apply_phase_convention(Matrix& v, Matrix& w, const std::vector<double>& sigma, double gate) {
    auto column_phase = [](const Matrix& m, std::size_t j) {
        std::size_t best = 0;
        double best_mod = -1.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double mod = std::norm(m(i, j));
            if (mod > best_mod) {
                best_mod = mod;
                best = i;
            }
        }
        const Complex entry = m(best, j);
        const double mag = std::abs(entry);
        return mag == 0.0 ? Complex{1.0, 0.0} : std::conj(entry) / mag;
    };
    auto scale_column = [](Matrix& m, std::size_t j, Complex lambda) {
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) *= lambda;
    };

    const std::size_t q = sigma.size();
    std::size_t paired = 0;
    while (paired < q && sigma[paired] > gate) ++paired;

    for (std::size_t j = 0; j < w.cols(); ++j) {
        const Complex lambda = column_phase(w, j);
        scale_column(w, j, lambda);
        if (j < paired) scale_column(v, j, lambda);
    }
    for (std::size_t j = paired; j < v.cols(); ++j) scale_column(v, j, column_phase(v, j));
}

} // namespace

namespace detail {

void singular_values_inplace(Matrix& work, std::vector<double>& out) {
    run_jacobi(work, nullptr);
    out.resize(work.cols());
    for (std::size_t j = 0; j < work.cols(); ++j)
        out[j] = std::sqrt(std::real(column_dot(work, j, j)));
    std::sort(out.begin(), out.end(), std::greater<>());
}

} // namespace detail

SvdFactors svd(const Matrix& f, const Tolerances& tol) {
    if (f.rows() == 0 || f.cols() == 0) throw PreconditionError("svd: empty matrix");
    require_finite(f, "svd");
    tol.validate();

    const bool transposed = f.rows() < f.cols();
    Matrix b = transposed ? f.adjoint() : f;
    const std::size_t tall = b.rows();  // >= wide
    const std::size_t wide = b.cols();  // == q

    Matrix rot = Matrix::identity(wide);
    run_jacobi(b, &rot);

    std::vector<double> norms(wide);
    for (std::size_t j = 0; j < wide; ++j) norms[j] = std::sqrt(std::real(column_dot(b, j, j)));
    std::vector<std::size_t> order(wide);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&norms](std::size_t a, std::size_t c) { return norms[a] > norms[c]; });

    std::vector<double> sigma(wide);
    for (std::size_t j = 0; j < wide; ++j) sigma[j] = norms[order[j]];
    const double sigma_max = sigma.empty() ? 0.0 : sigma[0];
    const double gate = sigma_max * kTinyGate;

    // Left factor: normalized columns while they carry signal, then a
    // deterministic completion of the basis.
    Matrix left(tall, tall);
    std::size_t solid = 0;
    while (solid < wide && sigma[solid] > gate && sigma[solid] > 0.0) ++solid;
    for (std::size_t j = 0; j < solid; ++j)
        for (std::size_t i = 0; i < tall; ++i) left(i, j) = b(i, order[j]) / sigma[j];
    complete_basis(left, solid);

    Matrix right(wide, wide);
    for (std::size_t j = 0; j < wide; ++j)
        for (std::size_t i = 0; i < wide; ++i) right(i, j) = rot(i, order[j]);

    SvdFactors out;
    out.rows = f.rows();
    out.cols = f.cols();
    out.sigma = std::move(sigma);
    if (transposed) {
        out.V = std::move(right);
        out.W = std::move(left);
    } else {
        out.V = std::move(left);
        out.W = std::move(right);
    }
    apply_phase_convention(out.V, out.W, out.sigma, gate);

    const double threshold = tol.resolved_rank_rel(out.rows, out.cols) * sigma_max;
    out.rank = 0;
    if (sigma_max > 0.0)
        while (out.rank < out.q() && out.sigma[out.rank] > threshold) ++out.rank;
    return out;
}

std::vector<double> singular_values(const Matrix& f) {
    if (f.rows() == 0 || f.cols() == 0) throw PreconditionError("singular_values: empty matrix");
    require_finite(f, "singular_values");
    Matrix work = f.rows() < f.cols() ? f.adjoint() : f;
    std::vector<double> out;
    detail::singular_values_inplace(work, out);
    out.resize(std::min(f.rows(), f.cols()));
    return out;
}

Matrix SvdFactors::reconstruct() const {
    Matrix out(rows, cols);
    for (std::size_t t = 0; t < q(); ++t) {
        if (sigma[t] == 0.0) continue;
        for (std::size_t i = 0; i < rows; ++i) {
            const Complex vs = V(i, t) * sigma[t];
            for (std::size_t j = 0; j < cols; ++j) out(i, j) += vs * std::conj(W(j, t));
        }
    }
    return out;
}

Matrix SvdFactors::rank_k_isometry(std::size_t k) const {
    if (k > q()) throw PreconditionError("rank_k_isometry: k exceeds min(m, n)");
    Matrix out(rows, cols);
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t i = 0; i < rows; ++i) {
            const Complex vt = V(i, t);
            for (std::size_t j = 0; j < cols; ++j) out(i, j) += vt * std::conj(W(j, t));
        }
    return out;
}

PolarDecomposition canonical_polar(const Matrix& f, const Tolerances& tol) {
    const SvdFactors factors = svd(f, tol);
    PolarDecomposition out;
    out.isometry = factors.rank_k_isometry(factors.rank);

    // |F| = W diag(sigma, padded) W*, n x n positive semidefinite.
    const std::size_t n = f.cols();
    out.positive = Matrix(n, n);
    for (std::size_t t = 0; t < factors.q(); ++t) {
        if (factors.sigma[t] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex ws = factors.W(i, t) * factors.sigma[t];
            for (std::size_t j = 0; j < n; ++j) out.positive(i, j) += ws * std::conj(factors.W(j, t));
        }
    }
    return out;
}

PartialIsometryCheck is_partial_isometry(const Matrix& x, const Tolerances& tol) {
    require_finite(x, "is_partial_isometry");
    tol.validate();
    const Matrix gram = x.adjoint() * x;
    const Matrix gram_sq = gram * gram;

    double idem = 0.0;
    double herm = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            idem = std::max(idem, std::abs(gram_sq(i, j) - gram(i, j)));
            herm = std::max(herm, std::abs(std::conj(gram(j, i)) - gram(i, j)));
        }

    PartialIsometryCheck out;
    out.is_partial_isometry = idem <= tol.iso && herm <= tol.iso;
    const double tr = std::real(gram.trace());
    const double rounded = std::round(tr);
    if (out.is_partial_isometry &&
        std::abs(tr - rounded) > tol.iso * static_cast<double>(std::max<std::size_t>(x.cols(), 1))) {
        out.is_partial_isometry = false;
    }
    out.rank = rounded < 0.0 ? 0 : static_cast<std::size_t>(rounded);
    return out;
}

} // namespace isoproxim
