#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/soliton.hpp"

using namespace gkdv;

namespace {
// Sup norm of Q'' + f(Q) - cQ with the second derivative from fourth-order
// differences of the sampled profile.
double elliptic_residual(const SolitonProfile& sp) {
    const Profile q2 = differentiate(sp.profile, 2);
    double r = 0.0;
    for (int i = 0; i < sp.profile.size(); ++i) {
        const double q = sp.profile.values[i];
        r = std::max(r, std::abs(q2.values[i] + sp.nl.f(q) - sp.c * q));
    }
    return r;
}

double first_integral_residual(const SolitonProfile& sp) {
    const Profile q1 = differentiate(sp.profile, 1);
    double r = 0.0;
    for (int i = 0; i < sp.profile.size(); ++i) {
        const double q = sp.profile.values[i];
        r = std::max(r, std::abs(q1.values[i] * q1.values[i] -
                                 (sp.c * q * q - 2.0 * sp.nl.F(q))));
    }
    return r;
}
}  // namespace

TEST_CASE("closed-form amplitudes") {
    const Grid g = default_grid(1.0);
    const SolitonProfile kdv = soliton_profile(Nonlinearity::pure_power(2), 1.0, g);
    CHECK(kdv.amplitude == doctest::Approx(1.5).epsilon(1e-12));

    const SolitonProfile mkdv = soliton_profile(Nonlinearity::pure_power(3), 1.0, g);
    CHECK(mkdv.amplitude == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    const Grid gc = default_grid(0.5);
    const SolitonProfile gard = soliton_profile(Nonlinearity::gardner(0.0), 0.5, gc);
    CHECK(gard.amplitude == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("profiles satisfy the equation and its first integral") {
    for (double c : {0.25, 1.0}) {
        const Grid g = default_grid(c);
        for (int m : {2, 3}) {
            const SolitonProfile sp =
                soliton_profile(Nonlinearity::pure_power(m), c, g);
            CHECK(elliptic_residual(sp) < 1e-7);
            CHECK(first_integral_residual(sp) < 1e-7);
        }
    }
    const Grid g = default_grid(1.0);
    const SolitonProfile gard = soliton_profile(Nonlinearity::gardner(0.15), 1.0, g);
    CHECK(elliptic_residual(gard) < 1e-7);
    const SolitonProfile fam = soliton_profile(
        Nonlinearity::epsilon_family(2, 1e-2, 4.0), 1.0, g);
    CHECK(elliptic_residual(fam) < 1e-7);
    CHECK(first_integral_residual(fam) < 1e-7);
}

TEST_CASE("turning-point construction agrees with the closed forms") {
    for (int m : {2, 3}) {
        for (double c : {0.25, 1.0}) {
            const Nonlinearity nl = Nonlinearity::pure_power(m);
            const SolitonPtr closed = power_soliton(m, c);
            const SolitonPtr tp = turning_point_soliton(nl, c);
            double err = 0.0;
            for (double x = 0.0; x <= 35.0 / std::sqrt(c); x += 0.37)
                err = std::max(err, std::abs(closed->value(x) - tp->value(x)));
            CHECK(err < 1e-8);
        }
    }
    // The Gardner closed form is reproduced as well.
    const SolitonPtr gc = gardner_soliton(0.12, 1.0);
    const SolitonPtr gt = turning_point_soliton(Nonlinearity::gardner(0.12), 1.0);
    double err = 0.0;
    for (double x = 0.0; x <= 30.0; x += 0.29)
        err = std::max(err, std::abs(gc->value(x) - gt->value(x)));
    CHECK(err < 1e-8);
}

TEST_CASE("gardner profile converges to the quadratic one linearly in mu") {
    const Grid g = default_grid(1.0, 1024);
    const SolitonProfile kdv = soliton_profile(Nonlinearity::pure_power(2), 1.0, g);
    double prev = 0.0;
    for (double mu : {0.02, 0.01}) {
        const SolitonProfile gard =
            soliton_profile(Nonlinearity::gardner(mu), 1.0, g);
        double d = 0.0;
        for (int i = 0; i < g.n_points; ++i)
            d = std::max(d, std::abs(gard.profile.values[i] -
                                     kdv.profile.values[i]));
        if (prev > 0.0) CHECK(prev / d == doctest::Approx(2.0).epsilon(0.15));
        prev = d;
    }
}

TEST_CASE("no soliton outside the admissible range") {
    CHECK_THROWS_AS(gardner_soliton(0.3, 1.0), NoSolitonError);  // c > 2/(9 mu)
    CHECK_THROWS_AS(
        turning_point_soliton(Nonlinearity::gardner(0.3), 1.0), NoSolitonError);
    CHECK_THROWS_AS(soliton_profile(Nonlinearity::pure_power(2), -1.0,
                                    default_grid(1.0)),
                    std::invalid_argument);
}

TEST_CASE("amplitude map is strictly increasing in c") {
    for (int m : {2, 3}) {
        const Nonlinearity nl = Nonlinearity::pure_power(m);
        double prev = 0.0;
        for (double c : {0.1, 0.2, 0.5, 1.0, 2.0}) {
            const double amp = make_soliton_evaluator(nl, c)->value(0.0);
            CHECK(amp > prev);
            prev = amp;
        }
    }
}

TEST_CASE("lambda_q closed forms") {
    const Grid g = default_grid(1.0);

    // Quadratic: Lambda Q = Q + x Q'/2, integral 3.
    {
        const SolitonPtr q = power_soliton(2, 1.0);
        const Profile lq = lambda_q(Nonlinearity::pure_power(2), g);
        double err = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            err = std::max(err, std::abs(lq.values[i] -
                                         (q->value(x) + 0.5 * x * q->deriv(x))));
        }
        CHECK(err < 1e-9);
        CHECK(integrate(lq) == doctest::Approx(3.0).epsilon(1e-9));
    }

    // Cubic: Lambda Q = (x Q' + Q)/2, integral 0.
    {
        const SolitonPtr q = power_soliton(3, 1.0);
        const Profile lq = lambda_q(Nonlinearity::pure_power(3), g);
        double err = 0.0;
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            err = std::max(err, std::abs(lq.values[i] -
                                         0.5 * (x * q->deriv(x) + q->value(x))));
        }
        CHECK(err < 1e-9);
        CHECK(std::abs(integrate(lq)) < 1e-9);
    }
}

TEST_CASE("stability derivative") {
    CHECK(stability_derivative(Nonlinearity::pure_power(2), 1.0) ==
          doctest::Approx(9.0).epsilon(1e-7));
    CHECK(stability_derivative(Nonlinearity::pure_power(3), 1.0) ==
          doctest::Approx(2.0).epsilon(1e-7));
    CHECK(stability_derivative(Nonlinearity::gardner(0.2), 1.0) > 0.0);
}
