#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sartensor/norms_analysis.hpp"
#include "sartensor/rpca.hpp"
#include "test_helpers.hpp"

#include <numbers>

using namespace sartensor;
using namespace sartensor::testing;

namespace {

ComplexMatrix concat_columns(const std::vector<ComplexMatrix>& blocks) {
    std::size_t cols = 0;
    for (const auto& b : blocks) cols += b.cols();
    ComplexMatrix out(blocks.front().rows(), cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, off + c) = b(r, c);
        off += b.cols();
    }
    return out;
}

// Unitary matrix from modified Gram-Schmidt on a random complex square matrix.
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    ComplexMatrix a = random_matrix(n, n, seed);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx proj(0, 0);
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(a(i, k)) * a(i, j);
            for (std::size_t i = 0; i < n; ++i) a(i, j) -= proj * a(i, k);
        }
        double nrm = 0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(a(i, j));
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; ++i) a(i, j) /= nrm;
    }
    return a;
}

// Panels with mutually orthogonal column and row spaces: A_i = U_i B_i V_i^H
// from disjoint column groups of fixed unitaries.
ComplexTensor3 orthogonal_panels(std::size_t n1, std::size_t n2, std::size_t n3, std::size_t rank,
                                 std::uint64_t seed) {
    REQUIRE(n3 * rank <= n1);
    REQUIRE(n3 * rank <= n2);
    const ComplexMatrix u = random_unitary(n1, seed);
    const ComplexMatrix v = random_unitary(n2, seed + 1);
    ComplexTensor3 t(n1, n2, n3);
    for (std::size_t l = 0; l < n3; ++l) {
        const ComplexMatrix b = random_matrix(rank, rank, seed + 2 + l);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                cplx acc(0, 0);
                for (std::size_t p = 0; p < rank; ++p)
                    for (std::size_t q = 0; q < rank; ++q)
                        acc += u(i, l * rank + p) * b(p, q) * std::conj(v(j, l * rank + q));
                t.panel(l)(i, j) = acc;
            }
    }
    return t;
}

} // namespace

TEST_CASE("nuclear_decoupled") {
    SUBCASE("identity-like panels") {
        ComplexTensor3 t(2, 2, 3);
        for (std::size_t l = 0; l < 3; ++l) {
            t.panel(l)(0, 0) = 1.0;
            t.panel(l)(1, 1) = 1.0;
        }
        CHECK(nuclear_decoupled(t) == doctest::Approx(6.0).epsilon(1e-12));
    }
    SUBCASE("zero tensor") {
        const ComplexTensor3 t(3, 4, 2);
        CHECK(nuclear_decoupled(t) == 0.0);
    }
    SUBCASE("recomputation through svd") {
        const ComplexTensor3 t = random_tensor(6, 5, 4, 31);
        double want = 0.0;
        for (std::size_t l = 0; l < 4; ++l)
            for (double s : svd(t.panel(l)).singular_values) want += s;
        CHECK(nuclear_decoupled(t) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("nuclear_fourier") {
    SUBCASE("identical panels give sqrt(n3) times the matrix norm") {
        const ComplexMatrix a = random_matrix(5, 4, 7);
        for (std::size_t n3 : {2, 4, 8}) {
            ComplexTensor3 t(5, 4, n3);
            for (std::size_t l = 0; l < n3; ++l) t.panel(l) = a;
            CHECK(nuclear_fourier(t) ==
                  doctest::Approx(std::sqrt(double(n3)) * nuclear_norm(a)).epsilon(1e-10));
        }
    }
    SUBCASE("single panel reduces to the matrix nuclear norm") {
        const ComplexTensor3 t = random_tensor(6, 3, 1, 8);
        CHECK(nuclear_fourier(t) == doctest::Approx(nuclear_norm(t.panel(0))).epsilon(1e-12));
    }
    SUBCASE("equals the nuclear norm of the block-circulant embedding") {
        const ComplexTensor3 t = random_tensor(4, 5, 3, 9);
        CHECK(nuclear_fourier(t) ==
              doctest::Approx(nuclear_norm(block_circulant_embed(t))).epsilon(1e-8));
    }
}

TEST_CASE("block_circulant_embed structure") {
    SUBCASE("one panel is returned as-is") {
        const ComplexTensor3 t = random_tensor(3, 2, 1, 4);
        CHECK(rel_err(block_circulant_embed(t), t.panel(0)) == 0.0);
    }
    SUBCASE("two panels arrange as (1/sqrt2) [[A,B],[B,A]]") {
        const ComplexTensor3 t = random_tensor(2, 3, 2, 5);
        const ComplexMatrix e = block_circulant_embed(t);
        REQUIRE(e.rows() == 4);
        REQUIRE(e.cols() == 6);
        const double s = 1.0 / std::sqrt(2.0);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(e(i, j) == s * t.panel(0)(i, j));
                CHECK(e(i, 3 + j) == s * t.panel(1)(i, j));
                CHECK(e(2 + i, j) == s * t.panel(1)(i, j));
                CHECK(e(2 + i, 3 + j) == s * t.panel(0)(i, j));
            }
    }
    SUBCASE("memory cap") {
        const ComplexTensor3 t = random_tensor(8, 8, 4, 6);
        CHECK_THROWS_AS(block_circulant_embed(t, 100), std::invalid_argument);
    }
}

TEST_CASE("bounds and the equality cases") {
    SUBCASE("random tensors stay inside the bracket") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ComplexTensor3 t = random_tensor(1 + seed % 9, 1 + (seed * 7) % 11,
                                                   1 + seed % 5, 100 + seed);
            const NormReport r = bounds(t);
            CHECK(r.lower_bound <= r.nuclear_fourier * (1 + 1e-12) + 1e-12);
            CHECK(r.nuclear_fourier <= r.upper_bound * (1 + 1e-12) + 1e-12);
            CHECK(r.nuclear_decoupled <= r.upper_bound);
            CHECK(r.frobenius == doctest::Approx(frobenius_norm(t)).epsilon(1e-12));
        }
    }
    SUBCASE("identical panels attain the lower bound") {
        const ComplexMatrix a = random_matrix(6, 4, 77);
        ComplexTensor3 t(6, 4, 5);
        for (std::size_t l = 0; l < 5; ++l) t.panel(l) = a;
        const NormReport r = bounds(t);
        CHECK(r.nuclear_fourier == doctest::Approx(r.lower_bound).epsilon(1e-8));
    }
    SUBCASE("column-orthogonal panels attain the upper bound") {
        const ComplexTensor3 t = orthogonal_panels(12, 12, 3, 4, 13);
        // verify the orthogonality premise A_i^H A_j = 0 numerically
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                if (i == j) continue;
                const auto& a = t.panel(i);
                const auto& b = t.panel(j);
                double max_inner = 0.0;
                for (std::size_t p = 0; p < a.cols(); ++p)
                    for (std::size_t q = 0; q < b.cols(); ++q) {
                        cplx acc(0, 0);
                        for (std::size_t r = 0; r < a.rows(); ++r)
                            acc += std::conj(a(r, p)) * b(r, q);
                        max_inner = std::max(max_inner, std::abs(acc));
                    }
                REQUIRE(max_inner < 1e-10);
            }
        const NormReport r = bounds(t);
        CHECK(r.nuclear_fourier == doctest::Approx(r.upper_bound).epsilon(1e-8));
    }
    SUBCASE("scalar multiples of one matrix follow Corollary (b) panel-wise") {
        const ComplexMatrix a = random_matrix(5, 3, 21);
        std::mt19937_64 rng(4);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t n3 = 4;
        std::vector<cplx> beta(n3);
        ComplexTensor3 t(5, 3, n3);
        for (std::size_t l = 0; l < n3; ++l) {
            beta[l] = cplx(gauss(rng), gauss(rng));
            for (std::size_t i = 0; i < a.size(); ++i)
                t.panel(l).data()[i] = beta[l] * a.data()[i];
        }
        // each DFT panel is again a scalar multiple of a, so the Fourier norm
        // is the l1 norm of the DFT of beta times |A|_*
        double l1_hat = 0.0;
        for (std::size_t k = 0; k < n3; ++k) {
            cplx acc(0, 0);
            for (std::size_t l = 0; l < n3; ++l)
                acc += std::exp(cplx(0.0, 2.0 * std::numbers::pi * double(k * l) / double(n3))) *
                       beta[l];
            l1_hat += std::abs(acc) / std::sqrt(double(n3));
        }
        CHECK(nuclear_fourier(t) == doctest::Approx(l1_hat * nuclear_norm(a)).epsilon(1e-8));
    }
}

TEST_CASE("concatenation bounds (Theorem) and Corollary (b) on explicit blocks") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t k = 2 + rep % 4;
        const std::size_t m = 6 + rep % 3;
        std::vector<ComplexMatrix> blocks;
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            blocks.push_back(random_matrix(m, 2 + (rep + i) % 3, 500 + 13 * rep + i));
            const double nn = nuclear_norm(blocks.back());
            sum += nn;
            sumsq += nn * nn;
        }
        const double whole = nuclear_norm(concat_columns(blocks));
        CHECK(whole <= sum * (1 + 1e-10));
        CHECK(whole >= std::sqrt(sumsq) * (1 - 1e-10));
    }

    SUBCASE("Corollary (b): scaled copies") {
        const ComplexMatrix a = random_matrix(7, 3, 123);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t k : {2, 3, 5}) {
            std::vector<ComplexMatrix> blocks;
            double beta_sq = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const cplx b(gauss(rng), gauss(rng));
                beta_sq += std::norm(b);
                ComplexMatrix scaled = a;
                for (auto& v : scaled.data()) v *= b;
                blocks.push_back(scaled);
            }
            CHECK(nuclear_norm(concat_columns(blocks)) ==
                  doctest::Approx(std::sqrt(beta_sq) * nuclear_norm(a)).epsilon(1e-8));
        }
    }
}

TEST_CASE("shifted disjoint-support mover model: Fourier equals decoupled") {
    const ComplexMatrix a = random_matrix(6, 5, 321);
    const std::size_t n3 = 4;
    ComplexTensor3 t(6, 5 * n3, n3);
    for (std::size_t l = 0; l < n3; ++l)
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 5; ++j) t.panel(l)(i, l * 5 + j) = a(i, j);
    CHECK(nuclear_fourier(t) == doctest::Approx(nuclear_decoupled(t)).epsilon(1e-8));
    CHECK(nuclear_decoupled(t) == doctest::Approx(n3 * nuclear_norm(a)).epsilon(1e-10));
}

TEST_CASE("eta_report") {
    SUBCASE("identical parts give ratio one") {
        const ComplexTensor3 t = random_tensor(4, 6, 3, 55);
        for (EtaVariant v : {EtaVariant::Fourier, EtaVariant::Decoupled}) {
            const EtaReport r = eta_report(t, t, v);
            CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(r.eta_star == doctest::Approx(r.eta_min).epsilon(1e-12));
        }
    }
    SUBCASE("zero input is rejected") {
        const ComplexTensor3 t = random_tensor(4, 6, 3, 55);
        const ComplexTensor3 z(4, 6, 3);
        CHECK_THROWS_AS(eta_report(z, t, EtaVariant::Fourier), std::invalid_argument);
    }
    SUBCASE("matrix variant") {
        const ComplexMatrix low = random_matrix(8, 8, 1);
        const ComplexMatrix sparse = random_matrix(8, 8, 2);
        const EtaReport r = eta_report(low, sparse);
        CHECK(r.variant == EtaVariant::Matrix);
        CHECK(r.eta_star == doctest::Approx(std::sqrt(r.eta_min * r.eta_max)).epsilon(1e-12));
    }
}

TEST_CASE("matrix_eta_optimal") {
    RadarConfig cfg = RadarConfig::desk_default(512);

    SUBCASE("closed form at N = 0") {
        const double bdt = cfg.bandwidth * cfg.fast_dt;
        const double want =
            std::sqrt(cfg.pulse_interval * bdt /
                      (4.0 * cfg.aperture_duration * std::sqrt(std::numbers::pi))) *
            std::sqrt(1.0 / std::sqrt(0.5) * 0.5);
        CHECK(matrix_eta_optimal(cfg, 0.0) == doctest::Approx(want).epsilon(1e-12));
    }
    SUBCASE("monotone increasing in N") {
        // the closed form has d/dN > 0 for all N >= 0: the linear numerator
        // dominates the square-root denominator
        double prev = matrix_eta_optimal(cfg, 0.0);
        for (int n = 1; n <= 500; ++n) {
            const double cur = matrix_eta_optimal(cfg, double(n));
            CHECK(cur >= prev * (1 - 1e-12));
            prev = cur;
        }
    }
    SUBCASE("negative N rejected") {
        CHECK_THROWS_AS(matrix_eta_optimal(cfg, -1.0), std::invalid_argument);
    }
}

TEST_CASE("default eta follows the 1/sqrt(max(n1,n2)) rule") {
    CHECK(default_eta(64, 64) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(default_eta(10, 40) == doctest::Approx(1.0 / std::sqrt(40.0)).epsilon(1e-14));
    CHECK(default_eta(10, 40, 4) == doctest::Approx(1.0 / std::sqrt(160.0)).epsilon(1e-14));
}

TEST_CASE("cross_term_suppression") {
    CHECK(cross_term_suppression(2e-9, 2e-9, 6e10, 1e8) == doctest::Approx(1.0));
    CHECK(cross_term_suppression(2e-9, -2e-9, 6e10, 1e8) ==
          doctest::Approx(std::exp(-std::pow(6e10 / 1e8, 2))).epsilon(1e-10));
    CHECK_THROWS_AS(cross_term_suppression(0.0, 0.0, 6e10, 1e8), std::invalid_argument);
}

TEST_CASE("sweep on the standard scene (reduced)") {
    const RadarConfig cfg = RadarConfig::desk_default(128);
    SceneTemplate tpl;
    tpl.stationary_count = 10;
    tpl.mover_speed = 1.0;
    tpl.mover_reflectivity = 0.1;

    SweepGrid grid;
    grid.sub_aperture_fractions = {0.05, 0.1};
    grid.overlaps = {0.1, 0.5, 0.9};
    grid.alphas = {0.0, std::numbers::pi / 2.0};

    std::size_t skipped = 0;
    const std::vector<SweepPoint> points = sweep(tpl, cfg, grid, Exec::Parallel, &skipped);
    CHECK(points.size() + skipped == 12);

    SUBCASE("single-cell grid gives one row") {
        SweepGrid one;
        one.sub_aperture_fractions = {0.1};
        one.overlaps = {0.5};
        one.alphas = {0.0};
        CHECK(sweep(tpl, cfg, one).size() == 1);
    }

    SUBCASE("background Fourier/decoupled ratio decreases with overlap") {
        for (double f : grid.sub_aperture_fractions) {
            double r_low = 0, r_high = 0;
            for (const SweepPoint& p : points) {
                if (p.alpha != 0.0 || p.sub_fraction != f) continue;
                if (p.overlap == 0.1) r_low = p.nuc_ratio_low();
                if (p.overlap == 0.9) r_high = p.nuc_ratio_low();
            }
            CHECK(r_high < r_low);
            CHECK(r_high < 1.0);
        }
    }

    SUBCASE("eta ratio: Fourier beats decoupled at alpha = pi/2") {
        double best_f = 0, best_d = 0;
        for (const SweepPoint& p : points) {
            if (p.alpha == 0.0) continue;
            best_f = std::max(best_f, p.eta_fourier.ratio);
            best_d = std::max(best_d, p.eta_decoupled.ratio);
        }
        CHECK(best_f > best_d);
    }

    SUBCASE("deterministic") {
        const std::vector<SweepPoint> again = sweep(tpl, cfg, grid);
        REQUIRE(again.size() == points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            CHECK(again[i].eta_fourier.ratio == points[i].eta_fourier.ratio);
            CHECK(again[i].nuc_fourier_low == points[i].nuc_fourier_low);
        }
    }
}
