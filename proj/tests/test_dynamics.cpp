#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qkerr/dynamics.hpp"
#include "qkerr/errors.hpp"
#include "test_support.hpp"

using namespace qkerr;
using qkerr::testing::binomial_entropy_bits;
using qkerr::testing::max_abs_diff;
using qkerr::testing::random_state;

namespace {

const SystemParams kBeamSplitter{1.0, 0.0, -std::numbers::pi / 4, Deformation{1.0}};

double binomial_probability(int N, int m) {
    return std::tgamma(N + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(N - m + 1.0)) /
           std::ldexp(1.0, N);
}

DensityMatrix diagonal(std::initializer_list<double> values) {
    DensityMatrix rho{ComplexMatrix(values.size(), values.size())};
    std::size_t i = 0;
    for (double v : values) rho.entries(i, i) = v, ++i;
    return rho;
}

}  // namespace

TEST(PrepareFock, Examples) {
    for (std::size_t N : {0u, 5u, 10u}) {
        const auto s = prepare_fock(N);
        EXPECT_EQ(s.n_max(), N);
        EXPECT_EQ(s.amplitude(N, 0), Complex(1.0, 0.0));
        EXPECT_DOUBLE_EQ(s.norm(), 1.0);
        for (std::size_t n = 0; n <= N; ++n)
            for (std::size_t m = 0; n + m <= N; ++m)
                if (!(n == N && m == 0)) EXPECT_EQ(s.amplitude(n, m), Complex(0.0, 0.0));
    }
}

TEST(TwoModeState, OutOfRangeAccess) {
    TwoModeState s(3);
    EXPECT_EQ(s.amplitude(3, 1), Complex(0.0, 0.0));
    EXPECT_THROW(s.set_amplitude(2, 2, {1.0, 0.0}), DomainError);
}

TEST(PrepareCoherent, Examples) {
    const auto vac = prepare_coherent({0.0, 0.0}, Deformation{0.7});
    EXPECT_EQ(vac.n_max(), 0u);
    EXPECT_EQ(vac.amplitude(0, 0), Complex(1.0, 0.0));

    const auto poisson = prepare_coherent({0.5, 0.0}, Deformation{1.0});
    EXPECT_EQ(poisson.n_max(), 10u);
    double fact = 1.0, total = 0.0;
    for (std::size_t n = 0; n <= 10; ++n) {
        if (n) fact *= n;
        total += std::pow(0.5, n) / fact;
    }
    fact = 1.0;
    for (std::size_t n = 0; n <= 10; ++n) {
        if (n) fact *= n;
        EXPECT_NEAR(std::norm(poisson.amplitude(n, 0)), std::pow(0.5, n) / fact / total, 1e-15);
    }

    const auto deformed = prepare_coherent({0.5, 0.0}, Deformation{0.9});
    EXPECT_EQ(deformed.n_max(), 12u);
    EXPECT_NEAR(deformed.norm(), 1.0, 1e-14);
    for (std::size_t n = 0; n <= 12; ++n)
        for (std::size_t m = 1; n + m <= 12; ++m) EXPECT_EQ(deformed.amplitude(n, m), Complex(0.0, 0.0));
}

TEST(Evolve, ZeroTimeIsIdentity) {
    std::mt19937_64 rng(1);
    const auto s = random_state(6, rng);
    const SpectralCache cache({1.0, 0.02, 0.7, Deformation{0.8}}, 6);
    EXPECT_LE(max_abs_diff(evolve(s, cache, 0.0), s), 1e-14);
}

TEST(Evolve, FiftyFiftyBeamSplitter) {
    const SpectralCache cache(kBeamSplitter, 5);
    const auto psi = evolve(prepare_fock(5), cache, 1.0);
    for (int m = 0; m <= 5; ++m)
        EXPECT_NEAR(std::norm(psi.amplitude(5 - m, m)), binomial_probability(5, m), 1e-12) << m;
}

TEST(Evolve, Reversible) {
    std::mt19937_64 rng(2);
    for (double q : {1.0, 0.9, 0.6}) {
        const SpectralCache cache({1.0, 0.01, 1.0, Deformation{q}}, 8);
        const auto s = random_state(8, rng);
        for (double t : {0.3, 17.0, 640.0}) {
            const auto back = evolve(evolve(s, cache, t), cache, -t);
            EXPECT_LE(max_abs_diff(back, s), 1e-10) << "q=" << q << " t=" << t;
        }
    }
    // Fully degenerate free part: q = 1, omega = 1, chi = 0.
    const SpectralCache degenerate({1.0, 0.0, 0.5, Deformation{1.0}}, 8);
    const auto s = random_state(8, rng);
    EXPECT_LE(max_abs_diff(evolve(evolve(s, degenerate, 3.3), degenerate, -3.3), s), 1e-10);
}

TEST(Evolve, NormConserved) {
    std::mt19937_64 rng(3);
    const SpectralCache cache({1.0, 0.01, 1.0, Deformation{0.75}}, 10);
    const auto s = random_state(10, rng);
    for (double t = 0.0; t <= 800.0; t += 13.7) EXPECT_NEAR(evolve(s, cache, t).norm(), 1.0, 1e-10);
}

TEST(Evolve, MissingBlock) {
    const SpectralCache cache(kBeamSplitter, 3);
    EXPECT_THROW(evolve(prepare_fock(5), cache, 1.0), DomainError);
    EXPECT_THROW(cache.spectrum(4), DomainError);
    // Empty high blocks do not need spectra.
    TwoModeState s(6);
    s.set_amplitude(1, 1, {1.0, 0.0});
    EXPECT_NO_THROW(evolve(s, cache, 1.0));
}

TEST(DenseReference, AgreesWithBlockEvolution) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n_max = 1 + trial % 8;
        const SystemParams p{0.5 + u(rng), 0.05 * u(rng), 2.0 * u(rng) - 1.0, Deformation{0.3 + 0.7 * u(rng)}};
        const auto s = random_state(n_max, rng);
        const double t = 20.0 * u(rng) - 5.0;
        const SpectralCache cache(p, n_max);
        EXPECT_LE(max_abs_diff(evolve(s, cache, t), dense_reference_evolve(s, p, t)), 1e-9);
    }
}

TEST(DenseReference, ZeroTimeAndBeamSplitter) {
    std::mt19937_64 rng(5);
    const auto s = random_state(5, rng);
    EXPECT_LE(max_abs_diff(dense_reference_evolve(s, {1.0, 0.1, 0.3, Deformation{0.5}}, 0.0), s), 1e-12);
    const auto psi = dense_reference_evolve(prepare_fock(5), kBeamSplitter, 1.0);
    for (int m = 0; m <= 5; ++m)
        EXPECT_NEAR(std::norm(psi.amplitude(5 - m, m)), binomial_probability(5, m), 1e-10);
    EXPECT_THROW(dense_reference_evolve(prepare_fock(21), kBeamSplitter, 1.0), DomainError);
}

TEST(Reduced, ProductStateIsPure) {
    const std::vector<Complex> c{{0.6, 0.0}, {0.0, 0.8}};
    const std::vector<Complex> d{{std::sqrt(0.5), 0.0}, {0.0, -std::sqrt(0.5)}};
    TwoModeState s(2);
    for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t m = 0; m < 2 && n + m <= 2; ++m) s.set_amplitude(n, m, c[n] * d[m]);
    const auto rho = reduced_field(s);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(rho.entries(i, j) - c[i] * std::conj(c[j])), 0.0, 1e-15);
    EXPECT_NEAR(von_neumann_entropy(rho, LogBase::bits).value, 0.0, 1e-12);
    EXPECT_NEAR(purity(rho), 1.0, 1e-14);
}

TEST(Reduced, BellLike) {
    TwoModeState s(1);
    s.set_amplitude(1, 0, {std::sqrt(0.5), 0.0});
    s.set_amplitude(0, 1, {std::sqrt(0.5), 0.0});
    for (const auto& rho : {reduced_field(s), reduced_atom(s)}) {
        EXPECT_NEAR(rho.entries(0, 0).real(), 0.5, 1e-15);
        EXPECT_NEAR(rho.entries(1, 1).real(), 0.5, 1e-15);
        EXPECT_EQ(rho.entries(0, 1), Complex(0.0, 0.0));
        EXPECT_NEAR(von_neumann_entropy(rho, LogBase::bits).value, 1.0, 1e-14);
        EXPECT_NEAR(von_neumann_entropy(rho, LogBase::nats).value, std::log(2.0), 1e-14);
    }
}

TEST(Reduced, FockInputStaysDiagonal) {
    for (double q : {1.0, 0.9, 0.7}) {
        const SystemParams p{1.0, 0.01, 1.0, Deformation{q}};
        for (std::size_t N : {5u, 10u}) {
            const SpectralCache cache(p, N);
            for (double t : {0.7, 31.0, 314.0}) {
                const auto psi = evolve(prepare_fock(N), cache, t);
                for (const auto& rho : {reduced_field(psi), reduced_atom(psi)})
                    for (std::size_t i = 0; i <= N; ++i)
                        for (std::size_t j = 0; j <= N; ++j)
                            if (i != j) EXPECT_LE(std::abs(rho.entries(i, j)), 1e-12);
            }
        }
    }
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(von_neumann_entropy(diagonal({1.0, 0.0, 0.0}), LogBase::bits).value, 0.0, 1e-15);
    EXPECT_NEAR(von_neumann_entropy(diagonal({0.5, 0.5}), LogBase::bits).value, 1.0, 1e-15);

    DensityMatrix binomial{ComplexMatrix(6, 6)};
    for (int m = 0; m <= 5; ++m) binomial.entries(m, m) = binomial_probability(5, m);
    const double s = von_neumann_entropy(binomial, LogBase::bits).value;
    EXPECT_NEAR(s, binomial_entropy_bits(5), 1e-13);
    EXPECT_NEAR(s, 2.198, 5e-4);
    EXPECT_NEAR(von_neumann_entropy(binomial, LogBase::nats).value, 1.5236, 1e-4);
}

TEST(Entropy, ClampsRoundoffAndRejectsNegative) {
    EXPECT_NEAR(von_neumann_entropy(diagonal({1.0 + 5e-11, -5e-11}), LogBase::bits).value, 0.0, 1e-9);
    EXPECT_THROW(von_neumann_entropy(diagonal({1.001, -0.001}), LogBase::bits), NumericalError);
    EXPECT_THROW(von_neumann_entropy(diagonal({0.5, 0.4}), LogBase::bits), NumericalError);
}

TEST(Purity, Examples) {
    EXPECT_DOUBLE_EQ(purity(diagonal({1.0, 0.0})), 1.0);
    EXPECT_DOUBLE_EQ(purity(diagonal({0.5, 0.5})), 0.5);
}

TEST(Schmidt, BothHalvesAgree) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state(1 + trial % 9, rng);
        const auto rf = reduced_field(s);
        const auto ra = reduced_atom(s);
        EXPECT_NEAR(purity(rf), purity(ra), 1e-12);
        const double sf = von_neumann_entropy(rf, LogBase::bits).value;
        const double sa = von_neumann_entropy(ra, LogBase::bits).value;
        EXPECT_NEAR(sf, sa, 1e-8);
        EXPECT_GE(sf, 0.0);
        EXPECT_LE(sf, std::log2(static_cast<double>(rf.dim())) + 1e-12);
        EXPECT_NEAR(rf.trace().real(), 1.0, 1e-10);
    }
}

TEST(Continuity, NearlyUndeformedShortTime) {
    const SpectralCache exact({1.0, 0.01, 1.0, Deformation{1.0}}, 5);
    const SpectralCache near({1.0, 0.01, 1.0, Deformation{0.9999}}, 5);
    const auto psi0 = prepare_fock(5);
    for (double t = 0.0; t <= 20.0; t += 0.05) {
        const double a = von_neumann_entropy(reduced_field(evolve(psi0, exact, t)), LogBase::bits).value;
        const double b = von_neumann_entropy(reduced_field(evolve(psi0, near, t)), LogBase::bits).value;
        EXPECT_LE(std::abs(a - b), 0.02) << "t=" << t;
    }
}
