#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/nonlinearity.hpp"

using namespace gkdv;

TEST_CASE("eval_f families") {
    const Nonlinearity kdv = Nonlinearity::pure_power(2);
    CHECK(eval_f(kdv, 2.0, 0) == doctest::Approx(4.0));
    CHECK(eval_f(kdv, 2.0, 1) == doctest::Approx(4.0));
    CHECK(eval_f(kdv, 2.0, 2) == doctest::Approx(2.0));
    CHECK(eval_f(kdv, 2.0, 3) == doctest::Approx(0.0));

    const Nonlinearity gardner = Nonlinearity::gardner(0.1);
    CHECK(eval_f(gardner, 1.0, 1) == doctest::Approx(1.7));

    const Nonlinearity fam = Nonlinearity::epsilon_family(3, 0.01, 5.0);
    CHECK(eval_f(fam, 1.0, 0) == doctest::Approx(1.01));
}

TEST_CASE("primitive_F") {
    CHECK(primitive_F(Nonlinearity::pure_power(2), 3.0) == doctest::Approx(9.0));
    CHECK(primitive_F(Nonlinearity::pure_power(3), 2.0) == doctest::Approx(4.0));
    CHECK(primitive_F(Nonlinearity::gardner(0.2), 1.0) ==
          doctest::Approx(1.0 / 3.0 - 0.05));
}

TEST_CASE("epsilon family composition") {
    const Nonlinearity nl = Nonlinearity::epsilon_family(2, 1e-2, 4.0, 0.5);
    // cubic coefficient mu_hat eps^{1/(p-2)} = 0.5 * 0.1 = 0.05
    CHECK(nl.cubic_coef() == doctest::Approx(0.05));
    const double s = 0.7;
    CHECK(nl.f(s) == doctest::Approx(s * s + 0.05 * s * s * s +
                                     1e-2 * std::pow(s, 4)));
    // derivative orders
    CHECK(nl.f(s, 1) == doctest::Approx(2 * s + 0.15 * s * s +
                                        4e-2 * std::pow(s, 3)));
    CHECK(nl.f(s, 4) == doctest::Approx(24.0 * 1e-2));
}

TEST_CASE("non-integer power keeps the odd extension") {
    const Nonlinearity nl = Nonlinearity::epsilon_family(3, 0.1, 4.5);
    CHECK(nl.f(-1.0) == doctest::Approx(-(1.0 + 0.1)));
    CHECK(nl.F(-1.0) == doctest::Approx(0.25 + 0.1 / 5.5));
    CHECK(nl.F(1.0) == doctest::Approx(0.25 + 0.1 / 5.5));
}

TEST_CASE("json round trip") {
    const Nonlinearity nl = Nonlinearity::epsilon_family(2, 0.2, 4.0);
    const Nonlinearity back = Nonlinearity::from_json(nl.to_json());
    CHECK(back.m() == 2);
    CHECK(back.epsilon() == doctest::Approx(0.2));
    CHECK(back.p() == doctest::Approx(4.0));
    CHECK(back.family() == Family::EpsilonFamily);
    CHECK(back.f(0.5) == doctest::Approx(nl.f(0.5)));

    const Nonlinearity g = Nonlinearity::gardner(0.15);
    const Nonlinearity gb = Nonlinearity::from_json(g.to_json());
    CHECK(gb.gardner_mu() == doctest::Approx(0.15));

    const Nonlinearity c = Nonlinearity::custom(2, {{1.0, 2.0}, {0.2, 4.0}});
    const Nonlinearity cb = Nonlinearity::from_json(c.to_json());
    CHECK(cb.f(1.5) == doctest::Approx(c.f(1.5)));
}
