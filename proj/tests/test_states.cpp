#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qpol/states.hpp"
#include "support/generators.hpp"

using namespace qpol;
using Catch::Matchers::WithinAbs;

namespace {

// <a|b> summed over the number basis
complex overlap_series(complex a, complex b, int cutoff) {
    complex sum = 0.0, term = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        sum += term;
        term *= std::conj(a) * b / static_cast<double>(n + 1);
    }
    return std::exp(-0.5 * (std::norm(a) + std::norm(b))) * sum;
}

void check_state(const TwoModeCoherent& got, complex a, complex b, double tol = 1e-14) {
    CHECK_THAT(got.alpha.real(), WithinAbs(a.real(), tol));
    CHECK_THAT(got.alpha.imag(), WithinAbs(a.imag(), tol));
    CHECK_THAT(got.beta.real(), WithinAbs(b.real(), tol));
    CHECK_THAT(got.beta.imag(), WithinAbs(b.imag(), tol));
}

}  // namespace

TEST_CASE("coherent_overlap anchors") {
    CHECK(coherent_overlap(0.0, 0.0) == complex(1.0));
    const complex a(1.3, 0.7);
    CHECK_THAT(std::abs(coherent_overlap(a, a) - 1.0), WithinAbs(0.0, 1e-15));

    const double series = std::abs(overlap_series(1.0, -1.0, 60));
    CHECK_THAT(series, WithinAbs(0.1353352832366127, 1e-15));
    CHECK_THAT(std::abs(coherent_overlap(1.0, -1.0)), WithinAbs(series, 1e-15));
}

TEST_CASE("coherent_overlap matches the number-basis series") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const complex a = testing::random_amplitude(rng, 3.0), b = testing::random_amplitude(rng, 3.0);
        CHECK_THAT(std::abs(coherent_overlap(a, b) - overlap_series(a, b, 120)), WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("coherent_overlap is conjugate symmetric and bounded") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const complex a = testing::random_amplitude(rng, 4.0), b = testing::random_amplitude(rng, 4.0);
        const complex ab = coherent_overlap(a, b), ba = coherent_overlap(b, a);
        REQUIRE_THAT(std::abs(ab - std::conj(ba)), WithinAbs(0.0, 1e-15));
        REQUIRE(std::abs(ab) <= 1.0 + 1e-15);
    }
}

TEST_CASE("norm_constant") {
    const TwoModeCoherent s{complex(0.4, -1.2), complex(2.0, 0.3)};
    CHECK_THAT(norm_constant(s, s), WithinAbs(0.5, 1e-15));

    // psi3 with |alpha|^2 = 1
    const double n3 = norm_constant({1.0, 0.0}, {0.0, 1.0});
    CHECK_THAT(n3, WithinAbs(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-1.0))), 1e-15));
    CHECK_THAT(n3, WithinAbs(0.604590, 5e-7));

    // psi2 in the orthogonal-term limit
    CHECK_THAT(norm_constant({-6.0, -6.0}, {6.0, 6.0}), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
}

TEST_CASE("norm_constant flags cancelling terms") {
    // <A|B> = e^{i pi} to double precision: huge amplitude, tiny relative phase kick
    const double big = 1e7;
    const TwoModeCoherent a{big, 0.0};
    const TwoModeCoherent b{complex(big, std::numbers::pi / big), 0.0};
    CHECK_THROWS_AS(norm_constant(a, b), DegenerateSuperposition);
    CHECK_THROWS_AS(CatSuperposition(a, b), DegenerateSuperposition);
}

TEST_CASE("phase_shift") {
    check_state(phase_shift({2.0, 0.0}, std::numbers::pi), complex(0, 2), 0.0);
    const TwoModeCoherent s{complex(0.3, 0.1), complex(-1.0, 2.0)};
    CHECK(phase_shift(s, 0.0) == s);
    check_state(phase_shift({1.0, 1.0}, std::numbers::pi / 2), std::polar(1.0, std::numbers::pi / 4),
                std::polar(1.0, -std::numbers::pi / 4));
}

TEST_CASE("rotate follows the printed map") {
    const TwoModeCoherent s{complex(0.3, 0.1), complex(-1.0, 2.0)};
    CHECK(rotate(s, 0.0) == s);
    check_state(rotate({2.0, 0.0}, std::numbers::pi / 2), 0.0, -2.0);
    check_state(rotate({1.0, 3.0}, std::numbers::pi / 4), 2.0 * std::sqrt(2.0), std::sqrt(2.0));
}

TEST_CASE("rotate conserves photon number and composes") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-7.0, 7.0);
    for (int i = 0; i < 500; ++i) {
        const auto s = testing::random_coherent(rng, 3.0);
        const double t1 = angle(rng), t2 = angle(rng);
        REQUIRE_THAT(rotate(s, t1).mean_photons(), WithinAbs(s.mean_photons(), 1e-12));
        const auto lhs = rotate(rotate(s, t1), t2), rhs = rotate(s, t1 + t2);
        REQUIRE_THAT(std::abs(lhs.alpha - rhs.alpha), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(lhs.beta - rhs.beta), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("crc_transform") {
    const auto psi1 = NamedState::psi1(1.7, 0.4);
    const auto same = crc_transform(psi1.first(), psi1.second(), {0.0, 0.0, 0.0});
    CHECK(same.first() == psi1.first());
    CHECK(same.second() == psi1.second());

    SECTION("a quarter-pi rotation factorizes psi1") {
        for (auto [a, b] : {std::pair{1.7, 0.4}, std::pair{2.0, 0.0}, std::pair{-0.5, 1.5}}) {
            const auto k = NamedState::psi1(a, b);
            const auto out = crc_transform(k.first(), k.second(), {0.0, std::numbers::pi / 4, 0.0});
            // the rotated branches share their mode-1 label (alpha + beta)/sqrt(2)
            CHECK_THAT(std::abs(out.first().alpha - out.second().alpha), WithinAbs(0.0, 1e-15));
            CHECK_THAT(out.first().alpha.real(), WithinAbs((a + b) / std::sqrt(2.0), 1e-15));
            CHECK_THAT(std::abs(out.first().beta + out.second().beta), WithinAbs(0.0, 1e-15));
            CHECK_THAT(out.first().beta.real(), WithinAbs((b - a) / std::sqrt(2.0), 1e-15));
        }
    }

    SECTION("termwise composition of compensators and rotator") {
        const CrcParams p{0.3, 0.9, -1.1};
        const TwoModeCoherent s{complex(0.5, -0.2), complex(1.0, 0.7)};
        const auto want = phase_shift(rotate(phase_shift(s, p.phi1), p.theta), p.phi2);
        CHECK(crc_transform(s, p) == want);
        // output labels of the printed device formula for real inputs
        const double a = 1.2, b = -0.3, t = p.theta;
        const complex i(0, 1);
        const auto out = crc_transform(TwoModeCoherent{a, b}, p);
        const complex m1 = b * std::sin(t) * std::exp(i * (p.phi2 - p.phi1) / 2.0) +
                           a * std::exp(i * (p.phi2 + p.phi1) / 2.0) * std::cos(t);
        const complex m2 = b * std::exp(-i * (p.phi2 + p.phi1) / 2.0) * std::cos(t) -
                           a * std::exp(-i * (p.phi2 - p.phi1) / 2.0) * std::sin(t);
        CHECK_THAT(std::abs(out.alpha - m1), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(out.beta - m2), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("named states") {
    const auto p1 = make_named_state(NamedState::psi1(1.0, 1.0));
    CHECK(p1.first() == TwoModeCoherent{1.0, 1.0});
    CHECK(p1.second() == TwoModeCoherent{1.0, 1.0});
    CHECK_THAT(p1.norm(), WithinAbs(0.5, 1e-15));

    const auto p3 = make_named_state(NamedState::psi3(0.0));
    CHECK(p3.first() == TwoModeCoherent{});
    CHECK_THAT(2.0 * p3.norm(), WithinAbs(1.0, 1e-15));

    const auto k2 = NamedState::psi2(1.0);
    CHECK_THAT(make_named_state(k2).norm(), WithinAbs(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-4.0))), 1e-15));
    CHECK_THAT(k2.norm(), WithinAbs(0.7007193, 5e-7));

    SECTION("closed-form N1, N2, N3 equal the general normalization") {
        for (double a : {0.0, 0.3, 1.0, 1.7, -2.2})
            for (double b : {0.0, 0.5, -1.1, 2.0}) {
                for (const auto& k : {NamedState::psi1(a, b), NamedState::psi2(a), NamedState::psi3(a)}) {
                    REQUIRE_THAT(k.norm(), WithinAbs(make_named_state(k).norm(), 1e-14));
                    REQUIRE_THAT(k.delta(), WithinAbs(make_named_state(k).delta().real(), 1e-14));
                }
            }
    }

    CHECK_THROWS_AS(NamedState::make(NamedKind::psi1, complex(1.0, 0.1), 1.0), NonRealParameter);
    CHECK_THROWS_AS(NamedState::make(NamedKind::psi3, 1.0, complex(0.0, -2.0)), NonRealParameter);
    CHECK(NamedState::make(NamedKind::psi2, 1.5).alpha == 1.5);
}
