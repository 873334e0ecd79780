#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polyflow/errors.hpp"
#include "polyflow/model.hpp"
#include "polyflow/quadrature.hpp"

using namespace polyflow;

TEST_CASE("linear chain coupling matrix and eigenvalues") {
    auto a1 = linear_chain_rouse(1);
    CHECK(a1 == std::vector<double>{2.0});
    CHECK(rouse_min_eigenvalue(a1, 1) == doctest::Approx(2.0));

    auto a2 = linear_chain_rouse(2);
    CHECK(a2 == std::vector<double>{2.0, -1.0, -1.0, 2.0});
    CHECK(rouse_min_eigenvalue(a2, 2) == doctest::Approx(1.0).epsilon(1e-12));

    // K = 3 spectrum is 2 - sqrt(2), 2, 2 + sqrt(2)
    auto a3 = linear_chain_rouse(3);
    CHECK(rouse_min_eigenvalue(a3, 3) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(rouse_min_eigenvalue({1.0, 2.0, 2.0, 1.0}, 2), NotPositiveDefinite);
    CHECK_THROWS_AS(rouse_min_eigenvalue({1.0, 2.0, 0.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("make_chain validation collects all violations") {
    try {
        make_chain(0, 3, {1.5}, {});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations.size() >= 3);
    }
    // good chain
    auto c = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
    CHECK(c.bead_coeff == 2);
    CHECK(c.theta[0] == 2.0);
    CHECK(c.rouse_min_eig == doctest::Approx(2.0));
}

TEST_CASE("Maxwellian normalization integral") {
    // closed form for d = 2: 2 pi b / (b + 2)
    for (double b : {3.0, 4.0, 7.5}) {
        auto c = make_chain(1, 2, {b}, linear_chain_rouse(1));
        CHECK(c.z[0] == doctest::Approx(2.0 * M_PI * b / (b + 2.0)).epsilon(1e-10));
    }
    auto c = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
    CHECK(c.z[0] == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("spring potential and force") {
    auto c = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
    auto u0 = spring_potential(0.0, 0, c);
    CHECK(u0.value == 0.0);
    CHECK(u0.deriv == 1.0);
    auto uh = spring_potential(0.5, 0, c);
    CHECK(uh.value == doctest::Approx(-2.0 * std::log(0.75)).epsilon(1e-15));
    CHECK(uh.deriv == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(spring_potential(2.0, 0, c), std::domain_error);
    CHECK_THROWS_AS(spring_potential(2.5, 0, c), std::domain_error);

    double q[2] = {1.0, 0.0}, f[2];
    spring_force(q, 0, c, f);
    CHECK(f[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(f[1] == 0.0);

    // derivative consistency
    const double h = 1e-6;
    for (double s : {0.1, 0.5, 1.2, 1.9}) {
        const double fd =
            (spring_potential(s + h, 0, c).value - spring_potential(s - h, 0, c).value) / (2 * h);
        CHECK(spring_potential(s, 0, c).deriv == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("Maxwellian pointwise and moments") {
    auto c = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
    double q0[2] = {0.0, 0.0};
    CHECK(maxwellian(q0, c).value == doctest::Approx(3.0 / (4.0 * M_PI)).epsilon(1e-12));

    double qb[2] = {2.0, 0.0};  // |q| = sqrt(b)
    auto mb = maxwellian(qb, c);
    CHECK(mb.value == 0.0);
    CHECK(std::isinf(mb.log_value));

    double qout[2] = {2.1, 0.0};
    CHECK_THROWS_AS(maxwellian(qout, c), std::domain_error);

    // independent radial oracle: total mass 1, second moment 2b/(b+4)
    for (double b : {3.0, 4.0}) {
        auto cc = make_chain(1, 2, {b}, linear_chain_rouse(1));
        auto radial = [&](double r, int pow2) {
            double q[2] = {r, 0.0};
            return 2.0 * M_PI * r * maxwellian(q, cc).value * std::pow(r, pow2);
        };
        const double mass =
            quad::adaptive([&](double r) { return radial(r, 0); }, 0.0, std::sqrt(b), 1e-11);
        const double m2 =
            quad::adaptive([&](double r) { return radial(r, 2); }, 0.0, std::sqrt(b), 1e-11);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m2 == doctest::Approx(2.0 * b / (b + 4.0)).epsilon(1e-9));
    }

    // two-spring Maxwellian factorizes
    auto c2 = make_chain(2, 2, {4.0, 4.0}, linear_chain_rouse(2));
    double q2[4] = {0.5, 0.1, -0.3, 0.2};
    double qa[2] = {0.5, 0.1}, qbb[2] = {-0.3, 0.2};
    CHECK(maxwellian(q2, c2).value ==
          doctest::Approx(maxwellian(qa, c).value * maxwellian(qbb, c).value).epsilon(1e-13));
}

TEST_CASE("equation of state and primitive") {
    ModelParams mp;
    mp.c_p = 1.0;
    mp.gamma = 2.0;
    mp.Gamma = 8.0;
    mp.kappa = 0.1;
    CHECK(eos_pressure(1.0, mp) == doctest::Approx(1.2).epsilon(1e-15));

    ModelParams noaug = mp;
    noaug.kappa = 0.0;
    CHECK(pressure_primitive(2.0, noaug) == doctest::Approx(4.0).epsilon(1e-15));

    ModelParams mp3 = mp;
    mp3.kappa = 0.3;
    CHECK(pressure_primitive(1.0, mp3) ==
          doctest::Approx(1.0 + 0.3 * (1.0 / 3.0 + 1.0 / 7.0)).epsilon(1e-15));
    CHECK(pressure_primitive(0.0, mp3) == 0.0);

    ModelParams tp = mp;
    tp.eos = EosKind::Tait;
    tp.tait = {2.0, 0.5, 1.0};
    tp.kappa = 0.0;
    CHECK(eos_pressure(1.0, tp) == doctest::Approx(1.5).epsilon(1e-15));

    // primitive identity rho P' - P = p for both forms, with augmentation
    const double h = 1e-6;
    for (const ModelParams& m : {mp, tp}) {
        ModelParams mm = m;
        mm.kappa = 0.2;
        for (double rho : {0.3, 0.9, 1.7}) {
            const double dP =
                (pressure_primitive(rho + h, mm) - pressure_primitive(rho - h, mm)) / (2 * h);
            CHECK(rho * dP - pressure_primitive(rho, mm) ==
                  doctest::Approx(eos_pressure(rho, mm)).epsilon(1e-7));
        }
    }
    CHECK_THROWS_AS(eos_pressure(-0.1, mp), std::domain_error);
}
