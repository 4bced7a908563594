#include <doctest.h>

#include <cmath>
#include <random>

#include "isoproxim/errors.hpp"
#include "isoproxim/isometry.hpp"
#include "isoproxim/oracle.hpp"
#include "support.hpp"

using namespace isoproxim;
using testsupport::random_complex;
using testsupport::random_partial_isometry;
using testsupport::random_unitary;
using testsupport::sorted_desc;
using testsupport::with_singular_values;

namespace {

std::vector<double> optimal_spectrum(const std::vector<double>& sigma, std::size_t k) {
    std::vector<double> v(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        v[i] = i < k ? std::abs(sigma[i] - 1.0) : sigma[i];
    return sorted_desc(v);
}

} // namespace

TEST_CASE("rank-1 approximations of diag(3,2)") {
    const Matrix f = Matrix::from_real_rows({{3, 0}, {0, 2}});

    SUBCASE("trace norm: flat minimum, certificate stays open") {
        const RankKResult res = nearest_rank_k(f, 1, Gauge::schatten(1));
        CHECK(std::abs(res.distance - 4.0) <= 1e-12);
        CHECK(res.certificate == Certificate::UnknownGaugeNotStrictlyConvex);
        CHECK(approx_equal(res.minimizer, Matrix::from_real_rows({{1, 0}, {0, 0}}), 1e-12));
        // The antipodal competitor attains the same trace-norm distance.
        const Matrix x = Matrix::from_real_rows({{0, 0}, {0, 1}});
        CHECK(std::abs(ui_norm(Gauge::schatten(1), f - x) - 4.0) <= 1e-12);
    }

    SUBCASE("Frobenius: unique") {
        const RankKResult res = nearest_rank_k(f, 1, Gauge::frobenius());
        CHECK(res.distance == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
        CHECK(res.certificate == Certificate::UniqueStrictlyConvex);
        CHECK(std::holds_alternative<UniqueMinimizer>(res.family));
        CHECK(std::abs(ui_norm(Gauge::frobenius(), f - res.minimizer) - res.distance) <=
              1e-10 * 4.0);
    }
}

TEST_CASE("a rank-k partial isometry is its own best approximation") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t m = 2 + trial % 3;
        const std::size_t n = 2 + (trial / 2) % 3;
        const std::size_t k = 1 + trial % std::min(m, n);
        const Matrix f = random_partial_isometry(rng, m, n, k);
        for (const Gauge& g : {Gauge::frobenius(), Gauge::schatten(3)}) {
            const RankKResult res = nearest_rank_k(f, k, g);
            CHECK(res.distance <= 1e-10);
            CHECK(approx_equal(res.minimizer, f, 1e-8));
            CHECK(res.certificate == Certificate::UniqueStrictlyConvex);
        }
    }
}

TEST_CASE("repeated singular value at the cut: projection family") {
    const Matrix f = Matrix::from_real_rows({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const RankKResult res = nearest_rank_k(f, 2, Gauge::frobenius());

    CHECK(res.certificate == Certificate::NonUniqueMultiplicity);
    const auto* family = std::get_if<ProjectionFamily>(&res.family);
    REQUIRE(family != nullptr);
    CHECK(family->l_k == 1);
    CHECK(family->e_k == 2);
    CHECK(family->proj_rank == 1);
    CHECK(res.distance == doctest::Approx(std::sqrt(2.0)));

    const Matrix p_lead = Matrix::from_real_rows({{1, 0}, {0, 0}});
    const Matrix p_tail = Matrix::from_real_rows({{0, 0}, {0, 1}});
    const Matrix x1 = sample_minimizer(res.family, p_lead);
    const Matrix x2 = sample_minimizer(res.family, p_tail);
    CHECK(approx_equal(x1, Matrix::from_real_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}), 1e-12));
    CHECK(approx_equal(x2, Matrix::from_real_rows({{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}), 1e-12));
    for (const Matrix& x : {x1, x2}) {
        CHECK(is_partial_isometry(x).rank == 2);
        CHECK(ui_norm(Gauge::frobenius(), f - x) == doctest::Approx(res.distance).epsilon(1e-12));
    }

    // A non-projection parameter is rejected.
    CHECK_THROWS_AS(sample_minimizer(res.family, Matrix::from_real_rows({{0.5, 0}, {0, 0.5}})),
                    PreconditionError);
    CHECK_THROWS_AS(sample_minimizer(res.family, Matrix::identity(2)), PreconditionError);
    CHECK_THROWS_AS(sample_minimizer(res.family, Matrix::identity(3)), PreconditionError);
}

TEST_CASE("distance formula examples") {
    CHECK(dist_rank_k(Matrix::from_real_rows({{3, 0}, {0, 0}}), 2, Gauge::frobenius()) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(dist_rank_k(Matrix::from_real_rows({{3, 0}, {0, 2}}), 2, Gauge::frobenius()) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

    std::mt19937_64 rng(5);
    const Matrix u = random_partial_isometry(rng, 3, 3, 2);
    for (const Gauge& g :
         {Gauge::schatten(1), Gauge::frobenius(), Gauge::parse("schatten:inf"), Gauge::ky_fan(2)})
        CHECK(dist_rank_k(u, 2, g) <= 1e-8);

    CHECK_THROWS_AS(dist_rank_k(Matrix::identity(2), 0, Gauge::frobenius()), PreconditionError);
    CHECK_THROWS_AS(dist_rank_k(Matrix::identity(2), 3, Gauge::frobenius()), PreconditionError);
}

TEST_CASE("requested rank above the matrix rank: isometry family") {
    const Matrix f = Matrix::from_real_rows({{0, 2}, {0, 0}});
    const RankKResult res = nearest_rank_k(f, 2, Gauge::frobenius());

    CHECK(res.certificate == Certificate::NonUniqueRankExcess);
    const auto* family = std::get_if<IsometryFamily>(&res.family);
    REQUIRE(family != nullptr);
    CHECK(family->rank_f == 1);
    CHECK(family->iso_rank == 1);
    CHECK(res.distance == doctest::Approx(std::sqrt(2.0)));

    const Matrix s_plus = Matrix::from_real_rows({{1}});
    const Matrix x = sample_minimizer(res.family, s_plus);
    CHECK(is_partial_isometry(x).rank == 2);
    CHECK(ui_norm(Gauge::frobenius(), f - x) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // Members satisfy F = X |F|.
    const Matrix fabs = canonical_polar(f).positive;
    CHECK((x * fabs - f).max_abs() <= 1e-9);
    const Matrix x2 = sample_minimizer(res.family, Matrix::from_real_rows({{-1}}));
    CHECK((x2 * fabs - f).max_abs() <= 1e-9);
    CHECK((x - x2).max_abs() > 0.5);

    CHECK_THROWS_AS(sample_minimizer(res.family, Matrix::from_real_rows({{0.5}})),
                    PreconditionError);
}

TEST_CASE("unique family returns the stored minimizer for any parameter") {
    const Matrix f = Matrix::from_real_rows({{3, 0}, {0, 2}});
    const RankKResult res = nearest_rank_k(f, 1, Gauge::frobenius());
    const Matrix sampled = sample_minimizer(res.family, Matrix());
    CHECK(approx_equal(sampled, res.minimizer, 0.0));
}

TEST_CASE("zero matrix: every rank request lands in the isometry family") {
    const RankKResult res = nearest_rank_k(Matrix(2, 2), 1, Gauge::frobenius());
    const auto* family = std::get_if<IsometryFamily>(&res.family);
    REQUIRE(family != nullptr);
    CHECK(family->rank_f == 0);
    CHECK(family->iso_rank == 1);
    CHECK(res.distance == doctest::Approx(1.0));
    CHECK(is_partial_isometry(res.minimizer).rank == 1);
}

TEST_CASE("global minimization") {
    SUBCASE("one large, one small singular value") {
        const GlobalResult res = nearest_global(Matrix::from_real_rows({{0.9, 0}, {0, 0.3}}),
                                                Gauge::frobenius());
        CHECK(res.best_ranks == std::vector<std::size_t>{1});
        CHECK(res.distance == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
        CHECK(approx_equal(res.results[0].minimizer, Matrix::from_real_rows({{1, 0}, {0, 0}}),
                           1e-12));
    }
    SUBCASE("boundary singular value ties two components") {
        const GlobalResult res = nearest_global(Matrix::from_real_rows({{0.8, 0}, {0, 0.5}}),
                                                Gauge::frobenius());
        CHECK(res.best_ranks == std::vector<std::size_t>{1, 2});
        CHECK(res.distance == doctest::Approx(std::sqrt(0.29)).epsilon(1e-12));
    }
    SUBCASE("all singular values above one half: canonical polar factor wins") {
        std::mt19937_64 rng(61);
        const Matrix f = with_singular_values(rng, 4, 3, {2.0, 1.4, 0.8});
        const GlobalResult res = nearest_global(f, Gauge::frobenius());
        CHECK(res.best_ranks == std::vector<std::size_t>{3});
        CHECK(approx_equal(res.results[0].minimizer, canonical_polar(f).isometry, 1e-9));
    }
    SUBCASE("zero matrix is rejected with the uniform distance") {
        try {
            nearest_global(Matrix(2, 3), Gauge::frobenius());
            FAIL("expected ZeroMatrixError");
        } catch (const ZeroMatrixError& e) {
            CHECK(e.rank_one_distance() == doctest::Approx(1.0));
        }
        try {
            nearest_global(Matrix(2, 3), Gauge::schatten(1));
            FAIL("expected ZeroMatrixError");
        } catch (const ZeroMatrixError& e) {
            CHECK(e.rank_one_distance() == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("optimal spectrum is attained") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t m = 2 + trial % 4;
        const std::size_t n = 2 + (trial / 3) % 4;
        const Matrix f = random_complex(rng, m, n, trial % 2 ? 0.4 : 1.7);
        const SvdFactors fac = svd(f);
        for (std::size_t k = 1; k <= fac.q(); ++k) {
            const Matrix u_k = fac.rank_k_isometry(k);
            const auto expected = optimal_spectrum(fac.sigma, k);
            const auto actual = singular_values(f - u_k);
            for (std::size_t i = 0; i < expected.size(); ++i)
                CHECK(std::abs(expected[i] - actual[i]) <= 1e-9);
        }
    }
}

TEST_CASE("optimal spectrum is a submajorization lower bound over the component") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + trial % 3;
        const std::size_t n = 2 + (trial / 2) % 3;
        const std::size_t k = 1 + trial % std::min(m, n);
        const Matrix f = random_complex(rng, m, n);
        const Matrix x = random_partial_isometry(rng, m, n, k);
        const auto bound = optimal_spectrum(singular_values(f), k);
        CHECK(submajorized(bound, singular_values(f - x)));
    }
}

TEST_CASE("minimizer does not depend on the singular vector basis") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t m = 3 + trial % 2;
        const std::size_t n = 3;
        const Matrix f = random_complex(rng, m, n);
        const SvdFactors fac = svd(f);
        const std::size_t k = 1 + trial % (fac.q() - 1);
        const RankKResult res = nearest_rank_k(f, k, Gauge::frobenius());
        REQUIRE(res.certificate == Certificate::UniqueStrictlyConvex);

        // Alternative singular vector bases: block-diagonal rotations that
        // mix only equal singular values plus arbitrary kernel rotations.
        for (int draw = 0; draw < 5; ++draw) {
            const std::size_t r = fac.rank;
            Matrix dv = Matrix::identity(m);
            Matrix dw = Matrix::identity(n);
            // Generic spectra: clusters are singletons, so the admissible D
            // is a diagonal phase matrix shared by V and W.
            for (std::size_t t = 0; t < r; ++t) {
                const Complex phase = std::polar(1.0, 0.7 * (draw + 1) + 1.3 * t);
                dv(t, t) = phase;
                dw(t, t) = phase;
            }
            const Matrix r1 = random_unitary(rng, m - r);
            const Matrix r2 = random_unitary(rng, n - r);
            for (std::size_t i = 0; i < m - r; ++i)
                for (std::size_t j = 0; j < m - r; ++j) dv(r + i, r + j) = r1(i, j);
            for (std::size_t i = 0; i < n - r; ++i)
                for (std::size_t j = 0; j < n - r; ++j) dw(r + i, r + j) = r2(i, j);

            SvdFactors alt = fac;
            alt.V = fac.V * dv;
            alt.W = fac.W * dw;
            CHECK((alt.reconstruct() - f).max_abs() <= 1e-10 * (1.0 + fac.sigma[0]));
            CHECK(approx_equal(alt.rank_k_isometry(k), res.minimizer, 1e-8));
        }

        // Row/column permutations travel through the whole pipeline.
        const std::size_t shift_r = 1 + trial % (m - 1);
        Matrix pr(m, m), pc(n, n);
        for (std::size_t i = 0; i < m; ++i) pr(i, (i + shift_r) % m) = 1.0;
        for (std::size_t j = 0; j < n; ++j) pc(j, (j + 1) % n) = 1.0;
        const Matrix permuted = pr * (f * pc.adjoint());
        const RankKResult res_p = nearest_rank_k(permuted, k, Gauge::frobenius());
        CHECK(approx_equal(res_p.minimizer, pr * (res.minimizer * pc.adjoint()), 1e-8));
    }
}

TEST_CASE("lift and project: polar factor of the truncated product") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t m = 2 + trial % 4;
        const std::size_t n = 2 + (trial / 2) % 4;
        const Matrix f = random_complex(rng, m, n);
        const SvdFactors fac = svd(f);
        for (std::size_t k = 1; k <= fac.rank; ++k) {
            Matrix proj(n, n); // W [I_k 0; 0 0] W*
            for (std::size_t t = 0; t < k; ++t)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        proj(i, j) += fac.W(i, t) * std::conj(fac.W(j, t));
            const Matrix lifted = f * proj;
            const Matrix u0 = canonical_polar(lifted).isometry;
            CHECK(approx_equal(u0, fac.rank_k_isometry(k), 1e-9));
        }
    }
}

TEST_CASE("borderline cluster flips the certificate conservatively") {
    std::mt19937_64 rng(89);
    const Matrix f = with_singular_values(rng, 3, 3, {2.0, 1.0 + 1e-12, 1.0});
    const RankKResult res = nearest_rank_k(f, 2, Gauge::frobenius());
    CHECK(res.certificate == Certificate::NonUniqueMultiplicity);

    // A comfortably separated pair stays unique.
    const Matrix g = with_singular_values(rng, 3, 3, {2.0, 1.5, 1.0});
    CHECK(nearest_rank_k(g, 2, Gauge::frobenius()).certificate ==
          Certificate::UniqueStrictlyConvex);
}

TEST_CASE("solver matches the brute-force search on small instances") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t m = 1 + trial % 3;
        const std::size_t n = 1 + (trial / 2) % 3;
        const Matrix f = random_complex(rng, m, n);
        for (std::size_t k = 1; k <= std::min(m, n); ++k) {
            const double solver = dist_rank_k(f, k, Gauge::frobenius());
            const double brute = oracle::exhaustive_nearest(f, k, Gauge::frobenius(), 10).distance;
            CHECK(solver <= brute + 1e-6);
            CHECK(std::abs(solver - brute) <= 1e-6);
        }
    }
}
