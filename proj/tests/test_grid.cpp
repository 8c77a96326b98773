#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "gkdv/grid.hpp"

using namespace gkdv;

TEST_CASE("grid construction and spacing") {
    Grid g = make_grid(40.0, 2048);
    CHECK(g.spacing == doctest::Approx(80.0 / 2047).epsilon(1e-12));
    CHECK(g.spacing == doctest::Approx(0.03907).epsilon(1e-3));

    Grid g2 = make_grid(1.0, 16);
    CHECK(g2.spacing == doctest::Approx(2.0 / 15).epsilon(1e-14));
    CHECK(g2.x(0) == doctest::Approx(-1.0));
    CHECK(g2.x(15) == doctest::Approx(1.0));

    CHECK_THROWS_AS(make_grid(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 8), std::invalid_argument);

    Grid g3 = make_grid(5.0, 17);  // odd point count includes x = 0
    CHECK(g3.x(8) == doctest::Approx(0.0));
}

TEST_CASE("simpson integration") {
    Grid g = make_grid(40.0, 4096);
    Profile sech2 = make_profile(
        g, [](double x) { double s = 1.0 / std::cosh(x); return s * s; },
        Parity::Even);
    CHECK(integrate(sech2) == doctest::Approx(2.0).epsilon(1e-8));

    // Speed-1 quadratic soliton has integral 6.
    Profile q = make_profile(
        g, [](double x) { double s = 1.0 / std::cosh(0.5 * x); return 1.5 * s * s; },
        Parity::Even);
    CHECK(integrate(q) == doctest::Approx(6.0).epsilon(1e-10));

    Profile odd = make_profile(
        g, [](double x) { return x * std::exp(-x * x); }, Parity::Odd);
    CHECK(std::abs(integrate(odd)) < 1e-12);

    Profile grower = make_profile(g, [](double x) { return x * x; });
    grower.decay = Decay::Unbounded;
    CHECK_THROWS_AS(integrate(grower), std::domain_error);
}

TEST_CASE("gaussian integral matches sqrt(pi) to 1e-10") {
    Grid g = make_grid(20.0, 4096);
    Profile gauss = make_profile(
        g, [](double x) { return std::exp(-x * x); }, Parity::Even);
    CHECK(integrate(gauss) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("cumulative primitive") {
    Grid g = make_grid(40.0, 4096);
    // p = Q' integrates back to Q - Q(0).
    auto Q = [](double x) { double s = 1.0 / std::cosh(0.5 * x); return 1.5 * s * s; };
    auto Qp = [&](double x) {
        double t = std::tanh(0.5 * x);
        return -Q(x) * t;
    };
    Profile qp = make_profile(g, Qp, Parity::Odd);
    Profile prim = cumulative_primitive(qp);
    double err = 0.0;
    for (int i = 0; i < g.n_points; ++i)
        err = std::max(err, std::abs(prim.values[i] - (Q(g.x(i)) - Q(0.0))));
    CHECK(err < 1e-9);
    CHECK(prim.parity == Parity::Even);

    // Even localized input gives an odd bounded output with limits +-I/2.
    Profile even = make_profile(
        g, [](double x) { return std::exp(-x * x); }, Parity::Even);
    Profile oddprim = cumulative_primitive(even);
    CHECK(oddprim.parity == Parity::Odd);
    const double half = 0.5 * integrate(even);
    CHECK(oddprim.values.back() == doctest::Approx(half).epsilon(1e-10));
    CHECK(oddprim.values.front() == doctest::Approx(-half).epsilon(1e-10));
}

TEST_CASE("differentiate") {
    Grid g = make_grid(3.0, 64);  // coarse on purpose
    Profile s = make_profile(g, [](double x) { return std::sin(x); });
    Profile c = differentiate(s, 1);
    double err = 0.0;
    for (int i = 0; i < g.n_points; ++i)
        err = std::max(err, std::abs(c.values[i] - std::cos(g.x(i))));
    const double h4 = std::pow(g.spacing, 4);
    CHECK(err < 20.0 * h4);

    Profile constant = make_profile(g, [](double) { return 3.14; });
    Profile dc = differentiate(constant, 1);
    CHECK(max_abs(dc) < 1e-12);

    CHECK_THROWS_AS(differentiate(s, 4), std::invalid_argument);
    CHECK_THROWS_AS(differentiate(s, 0), std::invalid_argument);
}

TEST_CASE("differentiate of cumulative_primitive is the identity") {
    Grid g = make_grid(40.0, 2048);
    Profile p = make_profile(
        g, [](double x) { return std::exp(-x * x / 4.0) * (1.0 + x * x); },
        Parity::Even);
    Profile roundtrip = differentiate(cumulative_primitive(p), 1);
    double err = 0.0;
    for (int i = 4; i < g.n_points - 4; ++i)
        err = std::max(err, std::abs(roundtrip.values[i] - p.values[i]));
    CHECK(err < 5.0 * std::pow(g.spacing, 3));
}

TEST_CASE("h1 norm") {
    Grid g = make_grid(40.0, 4096);
    Profile z = zero_profile(g);
    CHECK(h1_norm(z) == 0.0);

    Profile gauss = make_profile(
        g, [](double x) { return std::exp(-x * x); }, Parity::Even);
    // int g'^2 = sqrt(pi/2), int g^2 = sqrt(pi/2).
    const double expected = std::sqrt(std::sqrt(M_PI / 2.0) * 2.0);
    CHECK(h1_norm(gauss, {}, 1.0) == doctest::Approx(expected).epsilon(1e-7));

    // Window excluding the support sees nothing.
    CHECK(h1_norm(gauss, 30.0, 1.0) < 1e-8);
    CHECK_THROWS_AS(h1_norm(gauss, 41.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(h1_norm(gauss, {}, -1.0), std::invalid_argument);
}

TEST_CASE("csv round trip") {
    Grid g = make_grid(12.0, 128);
    Profile p = make_profile(
        g, [](double x) { return std::sin(1.7 * x) * std::exp(-0.1 * x * x); });
    const char* path = "test_profile_roundtrip.csv";
    write_csv(path, p);
    Profile q = read_csv(path);
    REQUIRE(q.size() == p.size());
    double err = 0.0;
    for (int i = 0; i < p.size(); ++i)
        err = std::max(err, std::abs(p.values[i] - q.values[i]));
    CHECK(err == 0.0);  // 17 significant digits round-trip doubles exactly
    std::remove(path);
}

TEST_CASE("interp_eval reproduces smooth profiles to near machine precision") {
    Grid g = make_grid(40.0, 4096);
    Profile p = make_profile(
        g, [](double x) { double s = 1.0 / std::cosh(0.5 * x); return 1.5 * s * s; },
        Parity::Even);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-35.0, 35.0);
    double err = 0.0;
    for (int k = 0; k < 500; ++k) {
        const double y = U(rng);
        const double exact = 1.5 / std::pow(std::cosh(0.5 * y), 2);
        err = std::max(err, std::abs(interp_eval(p, y) - exact));
    }
    CHECK(err < 1e-13);
    CHECK(interp_eval(p, 100.0, -7.0, 7.0) == 7.0);
    CHECK(interp_eval(p, -100.0, -7.0, 7.0) == -7.0);
}
