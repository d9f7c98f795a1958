#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qpol/fock_oracle.hpp"
#include "qpol/stokes.hpp"
#include "support/generators.hpp"

using namespace qpol;
using Catch::Matchers::WithinAbs;

namespace {

void check_moments(const StokesMoments& got, const StokesMoments& want, double tol) {
    for (int i = 0; i < 4; ++i) {
        INFO("component " << i);
        CHECK_THAT(got.mean[i], WithinAbs(want.mean[i], tol));
        CHECK_THAT(got.second[i], WithinAbs(want.second[i], tol));
        CHECK_THAT(got.var[i], WithinAbs(want.var[i], tol));
    }
}

}  // namespace

TEST_CASE("stokes_coherent anchors") {
    const auto h = stokes_coherent({2.0, 0.0});
    CHECK(h.mean[0] == 4.0);
    CHECK(h.mean[1] == 4.0);
    CHECK(h.mean[2] == 0.0);
    CHECK(h.mean[3] == 0.0);
    for (int i = 1; i < 4; ++i) CHECK_THAT(h.var[i], WithinAbs(4.0, 1e-14));
    check_moments(h, oracle_stokes(encode_coherent({2.0, 0.0})), 1e-9);

    const auto vac = stokes_coherent({});
    for (int i = 0; i < 4; ++i) {
        CHECK(vac.mean[i] == 0.0);
        CHECK(vac.var[i] == 0.0);
    }

    const auto rc = stokes_coherent({2.0, complex(0, 2)});
    CHECK_THAT(rc.mean[3], WithinAbs(8.0, 1e-14));
    CHECK_THAT(rc.mean[1], WithinAbs(0.0, 1e-14));
    CHECK_THAT(rc.mean[2], WithinAbs(0.0, 1e-14));
    check_moments(rc, oracle_stokes(encode_coherent({2.0, complex(0, 2)})), 1e-9);
}

TEST_CASE("coherent variances all equal the mean photon number") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto s = testing::random_coherent(rng, 3.0);
        const auto m = stokes_coherent(s);
        for (int k = 0; k < 4; ++k) REQUIRE_THAT(m.var[k], WithinAbs(s.mean_photons(), 1e-11));
    }
}

TEST_CASE("stokes_superposition reductions") {
    SECTION("identical terms collapse to the coherent moments") {
        std::mt19937_64 rng(9);
        for (int i = 0; i < 50; ++i) {
            const auto s = testing::random_coherent(rng, 2.5);
            check_moments(stokes_superposition({s, s}), stokes_coherent(s), 1e-10);
        }
    }

    SECTION("psi3 with |alpha|^2 = 1") {
        const auto c = make_named_state(NamedState::psi3(1.0));
        const auto m = stokes_superposition(c);
        CHECK_THAT(m.mean[1], WithinAbs(0.0, 1e-15));
        CHECK_THAT(m.mean[3], WithinAbs(0.0, 1e-15));
        const double n3 = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-1.0)));
        CHECK_THAT(m.mean[2], WithinAbs(2.0 * n3 * n3 * std::exp(-1.0), 1e-15));
        CHECK_THAT(m.mean[2], WithinAbs(0.268941, 5e-7));
        check_moments(m, oracle_stokes(encode_superposition(c)), 1e-9);
    }

    SECTION("psi2 with |alpha|^2 = 1") {
        const auto c = make_named_state(NamedState::psi2(1.0));
        const auto m = stokes_superposition(c);
        const double n2 = c.norm2(), d2 = std::exp(-4.0);
        CHECK_THAT(m.var[1], WithinAbs(4.0 * n2 * (1.0 - d2), 1e-14));
        CHECK_THAT(m.var[3], WithinAbs(4.0 * n2 * (1.0 - d2), 1e-14));
        check_moments(m, oracle_stokes(encode_superposition(c)), 1e-9);
    }
}

TEST_CASE("stokes_superposition matches the oracle on random complex superpositions") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 40; ++i) {
        const auto c = testing::random_superposition(rng, 2.5);
        check_moments(stokes_superposition(c), oracle_stokes(encode_superposition(c)), 1e-9);
    }
}

TEST_CASE("literal reading agrees only for real labels") {
    const CatSuperposition real{{1.2, -0.4}, {0.3, 0.9}};
    check_moments(stokes_superposition_literal(real), stokes_superposition(real), 1e-12);

    const CatSuperposition cplx{{complex(1.2, 0.5), -0.4}, {0.3, complex(0.2, 0.9)}};
    const auto lit = stokes_superposition_literal(cplx);
    const auto ok = stokes_superposition(cplx);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(lit.mean[i] - ok.mean[i]));
    CHECK(worst > 1e-3);
}

TEST_CASE("stokes_named printed forms") {
    SECTION("psi1 with coincident terms is the coherent |a, a> value") {
        const auto m = stokes_named(NamedState::psi1(1.3, 1.3));
        CHECK(m.mean[1] == 0.0);
        CHECK(m.mean[3] == 0.0);
        CHECK_THAT(m.mean[2], WithinAbs(2.0 * 1.3 * 1.3, 1e-14));
    }

    SECTION("psi2 printed mean of S2 at alpha = 1 is exactly 2") {
        const auto m = stokes_named(NamedState::psi2(1.0));
        CHECK_THAT(m.mean[2], WithinAbs(2.0, 1e-15));
        // the state itself has 2 tanh(2): the printed (1 + delta2) is not what the oracle sees
        const auto o = oracle_stokes(encode_superposition(make_named_state(NamedState::psi2(1.0))));
        CHECK_THAT(o.mean[2], WithinAbs(2.0 * std::tanh(2.0), 1e-10));
    }

    SECTION("psi3 printed forms agree with the general superposition") {
        for (double a : {0.0, 0.4, 1.0, 1.9, 2.7}) {
            const auto k = NamedState::psi3(a);
            check_moments(stokes_named(k), stokes_superposition(make_named_state(k)), 1e-10);
        }
    }

    SECTION("psi1 means, V1 and the inner reading of V2 agree; printed V3 does not") {
        for (double a : {0.2, 1.0, 1.6, 2.4})
            for (double b : {0.0, 0.7, 2.0}) {
                const auto k = NamedState::psi1(a, b);
                const auto printed = stokes_named(k, PrintedReading::inner);
                const auto ok = stokes_superposition(make_named_state(k));
                for (int i = 0; i < 4; ++i) REQUIRE_THAT(printed.mean[i], WithinAbs(ok.mean[i], 1e-10));
                REQUIRE_THAT(printed.var[1], WithinAbs(ok.var[1], 1e-10));
                REQUIRE_THAT(printed.var[2], WithinAbs(ok.var[2], 1e-10));
                const auto outer = stokes_named(k, PrintedReading::outer);
                REQUIRE(std::abs(outer.var[2] - ok.var[2]) > 1e-6);
            }
        const auto k = NamedState::psi1(0.0, 2.0);
        CHECK(stokes_named(k).var[3] < 0.0);  // printed V3 goes negative at alpha = 0
        CHECK(std::abs(stokes_named(NamedState::psi1(1.5, 1.5)).var[3] - 2 * 1.5 * 1.5) > 1.0);
    }

    SECTION("psi2 V1 and V3 agree, V2 has no consistent reading") {
        for (double a : {0.3, 0.8, 1.5}) {
            const auto k = NamedState::psi2(a);
            const auto ok = stokes_superposition(make_named_state(k));
            CHECK_THAT(stokes_named(k).var[1], WithinAbs(ok.var[1], 1e-12));
            CHECK_THAT(stokes_named(k).var[3], WithinAbs(ok.var[3], 1e-12));
            CHECK(std::abs(stokes_named(k, PrintedReading::inner).var[2] - ok.var[2]) > 1e-6);
            CHECK(std::abs(stokes_named(k, PrintedReading::outer).var[2] - ok.var[2]) > 1e-6);
        }
    }
}

TEST_CASE("named means match the general path on a grid") {
    for (double a = 0.0; a <= 3.0; a += 0.25)
        for (double b = 0.0; b <= 3.0; b += 0.5) {
            const auto k1 = NamedState::psi1(a, b);
            const auto k3 = NamedState::psi3(a);
            for (const auto& k : {k1, k3}) {
                const auto p = stokes_named(k), g = stokes_superposition(make_named_state(k));
                for (int i = 0; i < 4; ++i) REQUIRE_THAT(p.mean[i], WithinAbs(g.mean[i], 1e-10));
            }
            // psi2 mean of S2 is the documented discrepancy; S1 and S3 still agree
            const auto p2 = stokes_named(NamedState::psi2(a));
            const auto g2 = stokes_superposition(make_named_state(NamedState::psi2(a)));
            REQUIRE_THAT(p2.mean[1], WithinAbs(g2.mean[1], 1e-12));
            REQUIRE_THAT(p2.mean[3], WithinAbs(g2.mean[3], 1e-12));
        }
}

TEST_CASE("variance clipping") {
    std::vector<std::string> warnings;
    auto saved = warning_sink();
    warning_sink() = [&](std::string_view m) { warnings.emplace_back(m); };

    const auto m = StokesMoments::from_moments({1.0, 2.0, 0.0, 0.0}, {1.0, 4.0 - 5e-11, 0.0, 0.0});
    CHECK(m.var[1] == 0.0);
    CHECK(warnings.size() == 1);
    CHECK_THROWS_AS(StokesMoments::from_moments({0.0, 2.0, 0.0, 0.0}, {0.0, 4.0 - 1e-8, 0.0, 0.0}),
                    ConsistencyError);

    warning_sink() = saved;
}
