// Acceptance suite: one pass/fail line per criterion. Criteria are
// selected by number on the command line; with no arguments all nine run.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "gkdv/approx.hpp"
#include "gkdv/collision.hpp"
#include "gkdv/evolver.hpp"
#include "gkdv/linearized.hpp"
#include "gkdv/omega.hpp"
#include "gkdv/oracle.hpp"
#include "gkdv/soliton.hpp"

using namespace gkdv;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double r = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

// --------------------------------------------------------------- 1 ------
// Defect slope d(eps)/eps against the closed-form coefficient, 3%.
void criterion_1() {
    bool pass = true;
    std::string detail;
    for (auto [m, p] : std::vector<std::pair<int, double>>{
             {2, 4.0}, {2, 5.0}, {3, 4.0}, {3, 5.0}}) {
        const OracleComparison row = compare_defect_slope(m, p, 1e-3);
        pass = pass && row.rel_error < 0.03;
        detail += fmt("(%d,%g): rel %.2e  ", m, p, row.rel_error);
    }
    report(1, pass, detail);
}

// --------------------------------------------------------------- 2 ------
// Integrable families carry a vanishing defect; c_{2,3} = 0 closed form.
void criterion_2() {
    bool pass = true;
    std::string detail;
    auto check = [&](const char* name, const Nonlinearity& nl) {
        const CascadeSolution cas =
            solve_cascade_prefix(nl, default_grid(1.0), 2);
        const double b10 = cas.at(1, 0).b;
        const double d = defect(cas);
        const double tol = 1e-6 * std::pow(std::abs(b10), 3);
        pass = pass && std::abs(d) < tol;
        detail += fmt("%s: d=%.1e  ", name, d);
    };
    check("quadratic", Nonlinearity::pure_power(2));
    check("cubic", Nonlinearity::pure_power(3));
    check("mu=-0.3", Nonlinearity::gardner(-0.3));
    check("mu=0.1", Nonlinearity::gardner(0.1));
    check("mu=0.15", Nonlinearity::gardner(0.15));
    const double c23 = leading_coefficient(2, 3.0);
    pass = pass && c23 == 0.0;
    detail += fmt("c_{2,3}=%g", c23);
    report(2, pass, detail);
}

// --------------------------------------------------------------- 3 ------
// Limits of the first-order constants as eps -> 0, within 1e-4.
void criterion_3() {
    bool pass = true;
    std::string detail;
    const double eps = 2e-6;
    {
        const Nonlinearity nl = Nonlinearity::epsilon_family(2, eps, 4.0);
        const CascadeSolution cas =
            solve_cascade_prefix(nl, default_grid(1.0), 1);
        pass = pass && std::abs(cas.at(1, 0).a - 2.0 / 3.0) < 1e-4;
        pass = pass && std::abs(cas.at(1, 0).b + 2.0) < 1e-4;
        detail += fmt("m=2: a10=%.6f b10=%.6f  ", cas.at(1, 0).a,
                      cas.at(1, 0).b);
        const Profile& lq = cas.op->lambda_q_profile();
        std::vector<double> w(cas.grid.n_points);
        for (int i = 0; i < cas.grid.n_points; ++i)
            w[i] = lq.values[i] * cas.op->base_soliton().profile.values[i];
        const double lqq = simpson(w, cas.grid.spacing);
        pass = pass && std::abs(lqq - 4.5) < 1e-4;
        detail += fmt("lqq=%.6f  ", lqq);
    }
    {
        const Nonlinearity nl = Nonlinearity::epsilon_family(3, eps, 4.0);
        const CascadeSolution cas =
            solve_cascade_prefix(nl, default_grid(1.0), 1);
        pass = pass && std::abs(cas.at(1, 0).a) < 1e-4;
        pass = pass && std::abs(cas.at(1, 0).b + 2.0) < 1e-4;
        detail += fmt("m=3: a10=%.1e b10=%.6f", cas.at(1, 0).a,
                      cas.at(1, 0).b);
    }
    report(3, pass, detail);
}

// --------------------------------------------------------------- 4 ------
// Operator identities at 1e-6 sup norm on the default grid.
void criterion_4() {
    bool pass = true;
    std::string detail;
    const Grid g = default_grid(1.0);
    const int n = g.n_points;

    auto apply_wide = [&](const LinearizedOperator& op, const Profile& w) {
        Profile w2 = differentiate(w, 2, 8);
        Profile out = w;
        for (int i = 0; i < n; ++i)
            out.values[i] = -w2.values[i] + w.values[i] -
                            op.potential().values[i] * w.values[i];
        return out;
    };

    const std::vector<std::pair<std::string, Nonlinearity>> nls = {
        {"quadratic", Nonlinearity::pure_power(2)},
        {"cubic", Nonlinearity::pure_power(3)},
        {"gardner", Nonlinearity::gardner(0.1)},
        {"eps2", Nonlinearity::epsilon_family(2, 1e-3, 4.0)},
        {"eps3", Nonlinearity::epsilon_family(3, 1e-3, 4.0)},
    };
    for (const auto& [name, nl] : nls) {
        const LinearizedOperator op(nl, g);
        const SolitonPtr q = op.base_soliton().evaluator;
        const SpecialSolutions sp = op.special_solutions();
        double worst = 0.0;

        Profile qprime = make_profile(
            g, [&](double x) { return q->deriv(x); }, Parity::Odd);
        worst = std::max(worst, max_abs(apply_wide(op, qprime)));

        Profile mq = -1.0 * op.base_soliton().profile;
        worst = std::max(worst, sup_diff(apply_wide(op, op.lambda_q_profile()).values,
                                         mq.values));

        Profile rhs_phat = make_profile(g, [&](double x) {
            return 3.0 * q->value(x) - 2.0 * nl.f(q->value(x));
        });
        worst = std::max(worst, sup_diff(apply_wide(op, sp.P_hat).values,
                                         rhs_phat.values));

        Profile rhs_p = make_profile(g, [&](double x) {
            return 3.0 * q->second(x) + nl.f(q->value(x), 1) * q->value(x);
        });
        worst = std::max(worst,
                         sup_diff(apply_wide(op, sp.P).values, rhs_p.values));

        worst = std::max(worst, sup_diff(apply_wide(op, sp.P_bar).values,
                                         op.potential().values));
        pass = pass && worst < 1e-6;
        detail += fmt("%s: %.1e  ", name.c_str(), worst);
    }

    // Inverse identities of the two base operators.
    {
        const LinearizedOperator op(Nonlinearity::pure_power(3), g);
        const SolitonPtr q = op.base_soliton().evaluator;
        double worst = 0.0;
        auto ident = [&](const std::function<double(double)>& lhs,
                         const std::function<double(double)>& rhs) {
            Profile p = make_profile(g, lhs);
            const Profile ap = apply_wide(op, p);
            double r = 0.0;
            for (int i = 0; i < n; ++i)
                r = std::max(r, std::abs(ap.values[i] - rhs(g.x(i))));
            worst = std::max(worst, r);
        };
        ident(
            [&](double x) {
                const double Q = q->value(x);
                return -2.25 * x * q->deriv(x) - 3.75 * Q + 1.5 * Q * Q * Q;
            },
            [&](double x) {
                const double Q = q->value(x);
                const double t = 1.0 - Q * Q;
                return 4.5 * Q * t * t;
            });
        ident([&](double x) { return x * q->value(x) * q->deriv(x); },
              [&](double x) {
                  const double Q = q->value(x);
                  return -4.0 * Q * Q + 3.0 * std::pow(Q, 4) -
                         3.0 * x * Q * q->deriv(x) * (1.0 - Q * Q);
              });
        ident([&](double x) { return std::pow(q->value(x), 4); },
              [&](double x) {
                  const double Q = q->value(x);
                  return -15.0 * std::pow(Q, 4) + 7.0 * std::pow(Q, 6);
              });
        pass = pass && worst < 1e-6;
        detail += fmt("cubic-inv: %.1e  ", worst);
    }
    {
        const LinearizedOperator op(Nonlinearity::pure_power(2), g);
        const SolitonPtr q = op.base_soliton().evaluator;
        const Profile& lq = op.lambda_q_profile();
        double worst = 0.0;
        {
            Profile arg = lq;
            for (int i = 0; i < n; ++i)
                arg.values[i] = 1.0 - 4.0 / 3.0 * lq.values[i];
            const Profile out = apply_wide(op, arg);
            for (int i = 0; i < n; ++i)
                worst = std::max(worst,
                                 std::abs(out.values[i] -
                                          (1.0 - 2.0 / 3.0 * q->value(g.x(i)))));
        }
        {
            Profile arg = lq;
            for (int i = 0; i < n; ++i)
                arg.values[i] = 2.0 + 20.0 / 3.0 * lq.values[i] -
                                170.0 / 27.0 * q->value(g.x(i));
            const Profile out = apply_wide(op, arg);
            for (int i = 0; i < n; ++i) {
                const double Q = q->value(g.x(i));
                worst = std::max(
                    worst, std::abs(out.values[i] - (2.0 - 32.0 / 3.0 * Q +
                                                     170.0 / 27.0 * Q * Q)));
            }
        }
        pass = pass && worst < 1e-6;
        detail += fmt("quadratic-inv: %.1e", worst);
    }
    report(4, pass, detail);
}

// --------------------------------------------------------------- 5 ------
// The cascade b_{2,0} equals the closed integral route to 1e-8.
void criterion_5() {
    bool pass = true;
    std::string detail;
    const std::vector<std::pair<std::string, Nonlinearity>> nls = {
        {"quadratic", Nonlinearity::pure_power(2)},
        {"cubic", Nonlinearity::pure_power(3)},
        {"gardner+", Nonlinearity::gardner(0.1)},
        {"gardner-", Nonlinearity::gardner(-0.2)},
        {"eps2", Nonlinearity::epsilon_family(2, 1e-3, 4.0)},
        {"eps3", Nonlinearity::epsilon_family(3, 1e-3, 5.0)},
    };
    for (const auto& [name, nl] : nls) {
        const CascadeSolution cas =
            solve_cascade_prefix(nl, default_grid(1.0), 2);
        const double diff =
            std::abs(cas.at(2, 0).b - b20_closed_integrals(nl, cas));
        pass = pass && diff < 1e-8;
        detail += fmt("%s: %.1e  ", name.c_str(), diff);
    }
    report(5, pass, detail);
}

// --------------------------------------------------------------- 6 ------
// Residual scaling of the collision ansatz, m=3, eps=1e-2.
void criterion_6() {
    const CascadeSolution cas =
        solve_cascade(Nonlinearity::epsilon_family(3, 1e-2, 4.0));
    std::string detail;
    bool pass = true;
    for (auto variant : {ApproxVariant::Symmetric, ApproxVariant::Modified}) {
        double residuals[3];
        int i = 0;
        for (double c : {0.02, 0.01, 0.005}) {
            ApproxSolution ap(cas, c, variant);
            const Grid g = approx_eval_grid(c, 0.025);
            residuals[i++] = residual_h1_max(ap, g, 41);
        }
        const double slope =
            std::log(residuals[0] / residuals[2]) / std::log(4.0);
        const bool sym = variant == ApproxVariant::Symmetric;
        const double required = sym ? 3.0 / 2.0 + 0.75 - 0.15
                                    : 2.0 / 2.0 + 0.75 - 0.15;
        pass = pass && slope >= required;
        detail += fmt("%s: slope %.3f (needs >= %.2f)  ",
                      sym ? "symmetric" : "modified", slope, required);
    }
    report(6, pass, detail);
}

// --------------------------------------------------------------- 7 ------
// Evolver correctness: translation, conservation, dt order.
void criterion_7() {
    const Nonlinearity nl = Nonlinearity::pure_power(2);
    EvolverConfig cfg;
    cfg.domain_half_length = 50.0;
    cfg.n_modes = 1024;
    cfg.dt = 2e-3;
    const Grid g = periodic_grid(cfg.domain_half_length, cfg.n_modes);

    auto translation_error = [&](const EvolverConfig& ec) {
        const Profile u0 = place_solitons(nl, {{1.0, -20.0, 1.0}}, g);
        const auto states = evolve(nl, u0, 10.0, ec, 4);
        const SolitonPtr q = make_soliton_evaluator(nl, 1.0);
        Profile diff = states.back().u;
        for (int i = 0; i < g.n_points; ++i)
            diff.values[i] -= q->value(g.x(i) + 20.0 - states.back().t);
        return l2_norm(diff);
    };
    const double err = translation_error(cfg);

    const SolitonPtr q = make_soliton_evaluator(nl, 1.0);
    Profile pulse = make_profile(
        g, [&](double x) { return 0.5 * q->value(x + 15.0); });
    const auto states = evolve(nl, pulse, 10.0, cfg, 10);
    double mass_drift = 0.0, energy_drift = 0.0;
    for (const auto& st : states) {
        mass_drift = std::max(mass_drift,
                              std::abs(st.mass - states.front().mass) /
                                  std::abs(states.front().mass));
        energy_drift =
            std::max(energy_drift,
                     std::abs(st.energy - states.front().energy) /
                         std::max(1.0, std::abs(states.front().energy)));
    }

    EvolverConfig coarse = cfg;
    coarse.dt = 8e-3;
    EvolverConfig fine = cfg;
    fine.dt = 4e-3;
    const double ratio = translation_error(coarse) / translation_error(fine);

    const bool pass = err < 1e-6 && mass_drift < 1e-9 &&
                      energy_drift < 1e-8 && ratio >= 8.0;
    report(7, pass,
           fmt("translation %.1e (<1e-6), mass drift %.1e (<1e-9), energy "
               "drift %.1e (<1e-8), dt ratio %.1f (>=8)",
               err, mass_drift, energy_drift, ratio));
}

// --------------------------------------------------------------- 8 ------
// Elastic versus inelastic classification at desk scale.
void criterion_8() {
    bool pass = true;
    std::string detail;
    auto run = [&](const char* name, const Nonlinearity& nl, double c,
                   bool expect_inelastic) {
        ExperimentConfig cfg;
        cfg.nl = nl;
        cfg.c = c;
        cfg.evolver.n_modes = 4096;
        cfg.evolver.dt = 2.5e-3;
        const CollisionReport rep = run_collision_with_control(cfg);
        bool ok;
        if (expect_inelastic) {
            ok = rep.classification == Classification::Inelastic &&
                 rep.residual_h1_weighted >= 3.0 * rep.floor &&
                 rep.c1_plus > 1.0 && rep.c2_plus < c;
            detail += fmt("%s: %s resid=%.2e floor=%.2e c1+=%.8f c2+=%.6f  ",
                          name,
                          rep.classification == Classification::Inelastic
                              ? "inelastic"
                              : "elastic",
                          rep.residual_h1_weighted, rep.floor, rep.c1_plus,
                          rep.c2_plus);
        } else {
            ok = rep.classification == Classification::ElasticWithinFloor;
            detail += fmt("%s: %s resid=%.2e  ", name,
                          rep.classification ==
                                  Classification::ElasticWithinFloor
                              ? "elastic"
                              : "inelastic",
                          rep.residual_h1_weighted);
        }
        pass = pass && ok;
    };
    run("quadratic c=0.2", Nonlinearity::pure_power(2), 0.2, false);
    run("gardner mu=0.2 c=0.2", Nonlinearity::gardner(0.2), 0.2, false);
    run("quartic-perturbed c=0.1",
        Nonlinearity::epsilon_family(2, 0.2, 4.0), 0.1, true);
    report(8, pass, detail);
}

// --------------------------------------------------------------- 9 ------
// Scaling exponents of the residual in c and eps.
void criterion_9() {
    ExperimentConfig base;
    base.nl = Nonlinearity::epsilon_family(2, 0.2, 4.0);
    base.evolver.n_modes = 4096;
    base.evolver.dt = 2.5e-3;
    const std::vector<double> cs = {0.05, 0.1, 0.2};
    const std::vector<double> eps = {0.1, 0.2, 0.4};
    const ScalingStudy study = scaling_study(base, cs, eps, 3);

    double slope_c = 0.0, slope_eps = 0.0;
    for (const auto& [e, s] : study.slope_c_per_eps)
        if (e == 0.2) slope_c = s;
    for (const auto& [c, s] : study.slope_eps_per_c)
        if (c == 0.1) slope_eps = s;
    const double q = 2.0 + 0.25;
    const bool pass = slope_c >= q && slope_c <= q + 0.5 &&
                      slope_eps >= 0.8 && slope_eps <= 1.2;
    std::string detail =
        fmt("slope_c(eps=0.2)=%.3f (window [%.2f, %.2f]), "
            "slope_eps(c=0.1)=%.3f (window [0.8, 1.2])",
            slope_c, q, q + 0.5, slope_eps);
    for (const auto& row : study.rows)
        if (row.eps != 0.0 &&
            row.classification != Classification::Inelastic)
            detail += fmt("  [warn eps=%g c=%g not inelastic]", row.eps,
                          row.c);
    report(9, pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    auto want = [&](int k) {
        return selected.empty() || selected.count(k) > 0;
    };
    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    return failures == 0 ? 0 : 1;
}
