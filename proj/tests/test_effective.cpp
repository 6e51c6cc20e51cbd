#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "tpdicke/effective.hpp"

using namespace tpdicke;

TEST_CASE("critical couplings") {
    const CriticalPoints a = critical_couplings(1.0, 0.5);
    CHECK(a.g_c == doctest::Approx(0.353553390593274).epsilon(1e-14));
    CHECK(a.g_collapse == 0.5);
    const CriticalPoints b = critical_couplings(1.0, 0.1);
    CHECK(b.g_c == doctest::Approx(0.158113883008419).epsilon(1e-14));
    // omega1 = omega: transition and collapse merge
    const CriticalPoints c = critical_couplings(1.0, 1.0);
    CHECK(c.g_c == doctest::Approx(c.g_collapse).epsilon(1e-14));
    CHECK_THROWS_AS(critical_couplings(0.0, 0.5), DomainError);
}

TEST_CASE("normal phase closed forms") {
    ModelParams p0{1.0, 0.5, 0.0, 100};
    const NormalPhaseResult r0 = normal_phase(p0);
    CHECK(r0.epsilon1 == doctest::Approx(p0.delta()).epsilon(1e-14));
    CHECK(r0.eg1 == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(r0.zeta == 0.0);

    ModelParams p{1.0, 0.5, 0.25, 100};
    const NormalPhaseResult r = normal_phase(p);
    CHECK(r.epsilon1 == doctest::Approx(0.005 * std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r.zeta > 0.0);

    ModelParams bad = p;
    bad.g = bad.g_critical();
    CHECK_THROWS_AS(normal_phase(bad), DomainError);
}

TEST_CASE("displacement amplitude") {
    ModelParams p{1.0, 0.5, 0.4, 100};
    CHECK(displacement_beta(p) == doctest::Approx(0.446945).epsilon(1e-4));

    ModelParams near_gc = p;
    near_gc.g = near_gc.g_critical() * 1.0001;
    CHECK(displacement_beta(near_gc) < 0.02);

    ModelParams near_collapse = p;
    near_collapse.g = 0.49999;
    CHECK(displacement_beta(near_collapse) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-2));

    ModelParams below = p;
    below.g = 0.3;
    CHECK_THROWS_AS(displacement_beta(below), DomainError);
    ModelParams heavy{1.0, 1.2, 0.4, 100};
    CHECK_THROWS_AS(displacement_beta(heavy), DomainError);
}

TEST_CASE("super-radiant constants satisfy the defining identity") {
    ModelParams p{1.0, 0.5, 0.4, 100};
    const SuperradiantConstants c = superradiant_constants(p);
    CHECK(c.lambda_beta == doctest::Approx(0.639711).epsilon(1e-4));
    CHECK(c.r == doctest::Approx(-0.378843).epsilon(1e-4));
    CHECK(c.r <= 0.0);
    CHECK(c.doubly_degenerate);

    // the displacement is chosen to cancel the linear atomic term
    const double root = std::sqrt(p.omega * p.omega - c.lambda_beta * c.lambda_beta);
    const double identity =
        p.omega1 * c.beta - p.g * c.beta1 * c.beta2 * c.lambda_beta / root;
    CHECK(std::abs(identity) <= 1e-10);

    ModelParams near_gc = p;
    near_gc.g = near_gc.g_critical() * (1.0 + 1e-8);
    const SuperradiantConstants c0 = superradiant_constants(near_gc);
    CHECK(std::abs(c0.lambda_beta) < 1e-3);
    CHECK(std::abs(c0.r) < 1e-3);
    CHECK(std::abs(c0.lambda2) < 1e-3);
    CHECK(std::abs(c0.lambda3) < 1e-3);
}

TEST_CASE("super-radiant excitation energy vanishes at the transition") {
    ModelParams p{1.0, 0.5, 0.0, 100};
    const double gc = p.g_critical();
    p.g = gc * (1.0 + 1e-8);
    CHECK(superradiant_phase(p).epsilon2 < 1e-5);

    // finite and positive across the whole phase at a smaller omega1/omega
    ModelParams q{1.0, 0.1, 0.0, 100};
    const double qc = q.g_critical();
    double prev = 0.0;
    for (int i = 1; i <= 8; ++i) {
        q.g = qc + (0.49 - qc) * i / 8.0;
        const double eps = superradiant_phase(q).epsilon2;
        CHECK(eps > 0.0);
        CHECK(std::isfinite(eps));
        prev = eps;
    }
    CHECK(prev > 0.0);
}

TEST_CASE("thermodynamic-limit variant of the excitation radicand") {
    ModelParams p{1.0, 0.5, 0.42, 100};
    const double verbatim = superradiant_phase(p, false).epsilon2;
    const double dropped = superradiant_phase(p, true).epsilon2;
    CHECK(verbatim != dropped);
    CHECK(std::abs(verbatim - dropped) / verbatim < 0.05);
}

TEST_CASE("ground energy is continuous across g_c up to 1/N effects") {
    ModelParams p{1.0, 0.5, 0.0, 100};
    const double gc = p.g_critical();
    const double delta = 1e-3 * gc;
    ModelParams below = p, above = p;
    below.g = gc - delta;
    above.g = gc + delta;
    const double e1 = normal_phase(below).eg1;
    const double e2 = superradiant_phase(above).eg2;
    CHECK(std::abs(e1 - e2) <= 5e-3 * p.omega1);
}

TEST_CASE("pseudospin per atom") {
    ModelParams p{1.0, 0.5, 0.2, 100};
    CHECK(jz_thermo(p) == -0.5);
    p.g = 0.4;
    CHECK(jz_thermo(p) == doctest::Approx(-0.300240).epsilon(1e-4));
    p.g = 0.49999;  // beta^2 -> 1/2 like sqrt(g_collapse - g)
    CHECK(std::abs(jz_thermo(p)) < 5e-3);
    p.g = 0.5;
    CHECK_THROWS_AS(jz_thermo(p), DomainError);
}

TEST_CASE("gap asymptote matches the excitation energy near g_c") {
    ModelParams p{1.0, 0.5, 0.0, 100};
    const double gc = p.g_critical();
    for (double rel : {1e-6, 1e-8}) {
        p.g = gc * (1.0 - rel);
        const double eps = normal_phase(p).epsilon1;
        const double asym = gap_asymptote(p, p.g);
        CHECK(eps / asym == doctest::Approx(1.0).epsilon(1e-4));
    }
}
