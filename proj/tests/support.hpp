#pragma once

// Shared helpers for the unit and acceptance suites: seeded random
// matrices, random unitaries, and an independently coded Gram-based
// singular value routine used to cross-check the production SVD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "isoproxim/matrix.hpp"

namespace testsupport {

using isoproxim::Complex;
using isoproxim::Matrix;

inline Matrix random_complex(std::mt19937_64& rng, std::size_t m, std::size_t n,
                             double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = Complex{scale * normal(rng), scale * normal(rng)};
    return out;
}

// Gaussian matrix orthonormalized by modified Gram-Schmidt (two passes).
inline Matrix random_unitary(std::mt19937_64& rng, std::size_t n) {
    Matrix g = random_complex(rng, n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < j; ++p) {
                Complex proj{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, p)) * g(i, j);
                for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, p);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

// U diag(values) V* for random unitaries U, V: a matrix with prescribed
// singular values.
inline Matrix with_singular_values(std::mt19937_64& rng, std::size_t m, std::size_t n,
                                   const std::vector<double>& values) {
    const Matrix u = random_unitary(rng, m);
    const Matrix v = random_unitary(rng, n);
    return u * (Matrix::diagonal(values, m, n) * v.adjoint());
}

inline Matrix random_partial_isometry(std::mt19937_64& rng, std::size_t m, std::size_t n,
                                      std::size_t k) {
    std::vector<double> ones(k, 1.0);
    return with_singular_values(rng, m, n, ones);
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

// Independent singular value route: eigenvalues of the Gram matrix by a
// two-sided Hermitian Jacobi iteration, then square roots. Shares no code
// with the library's one-sided column sweep.
inline std::vector<double> gram_singular_values(const Matrix& f) {
    const bool use_left = f.rows() < f.cols();
    Matrix g = use_left ? f * f.adjoint() : f.adjoint() * f;
    const std::size_t n = g.rows();

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = g(p, q);
                const double mag = std::abs(apq);
                off = std::max(off, mag);
                const double app = g(p, p).real();
                const double aqq = g(q, q).real();
                if (mag <= 1e-16 * (std::abs(app) + std::abs(aqq))) continue;

                const Complex phase = apq / mag;
                const double tau = (aqq - app) / (2.0 * mag);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Complex zpq{s, 0.0};
                const Complex zqp = -s * std::conj(phase);
                const Complex zqq = c * std::conj(phase);

                for (std::size_t i = 0; i < n; ++i) { // columns: G <- G Z
                    const Complex gp = g(i, p);
                    const Complex gq = g(i, q);
                    g(i, p) = c * gp + zqp * gq;
                    g(i, q) = zpq * gp + zqq * gq;
                }
                for (std::size_t i = 0; i < n; ++i) { // rows: G <- Z* G
                    const Complex gp = g(p, i);
                    const Complex gq = g(q, i);
                    g(p, i) = c * gp + std::conj(zqp) * gq;
                    g(q, i) = std::conj(zpq) * gp + std::conj(zqq) * gq;
                }
            }
        }
        if (off <= 1e-15 * (1.0 + std::abs(g.trace()))) break;
    }

    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::sqrt(std::max(0.0, g(i, i).real())));
    std::sort(out.begin(), out.end(), std::greater<>());
    out.resize(std::min(f.rows(), f.cols()));
    return out;
}

} // namespace testsupport
