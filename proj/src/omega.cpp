#include "gkdv/omega.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "gkdv/errors.hpp"
#include "gkdv/expansion.hpp"

namespace gkdv {

std::vector<SigmaIndex> sigma_indices(int m) {
    if (m == 2)
        return {{1, 0}, {2, 0}, {1, 1}, {3, 0}, {2, 1}, {1, 2}};
    if (m == 3)
        return {{1, 0}, {2, 0}, {1, 1}, {3, 0}, {2, 1}, {4, 0}};
    throw std::invalid_argument("sigma_indices: m must be 2 or 3");
}

bool sigma_precedes(SigmaIndex a, SigmaIndex b) {
    return (a.k < b.k && a.l <= b.l) || (a.k <= b.k && a.l < b.l);
}

bool CascadeSolution::has(int k, int l) const {
    return solutions.count({k, l}) > 0;
}

const OmegaSolution& CascadeSolution::at(int k, int l) const {
    const auto it = solutions.find({k, l});
    if (it == solutions.end())
        throw OrderViolationError("cascade: index (" + std::to_string(k) +
                                  "," + std::to_string(l) + ") not solved");
    return it->second;
}

namespace {

double dot(const Profile& a, const Profile& b) {
    std::vector<double> w(a.values.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = a.values[i] * b.values[i];
    return simpson(w, a.grid.spacing);
}

// Decomposition of u_t + (u_xx - u + f(u))_x over the retained buckets,
// with the currently solved correction pairs substituted in.
Expansion build_decomposition(const Nonlinearity& nl,
                              const CascadeSolution& prior) {
    const LinearizedOperator& op = *prior.op;
    const Grid& g = op.grid();
    const int n = g.n_points;
    const std::vector<double>& qv = op.base_soliton().profile.values;
    const std::vector<Monomial>& mono = nl.monomials();

    Expansion beta(g, mono);
    for (const auto& [kl, sol] : prior.solutions)
        beta.add_constant(kl.first, kl.second, 0, sol.a);

    Expansion correction(g, mono);
    {
        std::vector<double> ones(n, 1.0);
        correction.add(1, 0, 0, ones);
    }
    for (const auto& [kl, sol] : prior.solutions) {
        correction.add(kl.first, kl.second, 0, sol.A.values);
        correction.add(kl.first, kl.second, 1, sol.B.values);
    }

    Expansion u = correction;
    u.add(0, 0, 0, qv);

    // f(u) by Taylor expansion around the big soliton; exact up to the
    // dropped orders for the polynomial part of degree <= J.
    const int order = nl.m() == 2 ? 3 : 4;
    Expansion fu(g, mono);
    {
        std::vector<double> f0(n);
        for (int i = 0; i < n; ++i) f0[i] = nl.f(qv[i]);
        fu.add(0, 0, 0, f0);
    }
    Expansion vj = correction;
    double factorial = 1.0;
    for (int j = 1; j <= order; ++j) {
        factorial *= j;
        std::vector<double> fj(n);
        for (int i = 0; i < n; ++i) fj[i] = nl.f(qv[i], j) / factorial;
        fu += vj.times_profile(fj);
        if (j < order) vj = vj.product(correction);
    }

    Expansion lin = u.dx(beta).dx(beta) + u.scaled(-1.0) + fu;
    return u.dt(beta) + lin.dx(beta);
}

double sup_residual(const Profile& p) { return max_abs(p); }

}  // namespace

std::pair<Profile, Profile> source_terms(const Nonlinearity& nl,
                                         SigmaIndex idx,
                                         const CascadeSolution& prior) {
    if (!prior.op)
        throw std::invalid_argument("source_terms: cascade carries no operator");
    for (const SigmaIndex& other : sigma_indices(nl.m()))
        if (sigma_precedes(other, idx) && !prior.has(other.k, other.l))
            throw OrderViolationError(
                "source_terms: predecessor (" + std::to_string(other.k) + "," +
                std::to_string(other.l) + ") unsolved");

    const Expansion S = build_decomposition(nl, prior);
    const Grid& g = prior.op->grid();

    Profile F;
    F.grid = g;
    F.values = S.coefficient(idx.k, idx.l, 0);
    Profile G;
    G.grid = g;
    G.values = S.coefficient(idx.k, idx.l, 1);
    symmetrize(F, Parity::Odd);
    symmetrize(G, Parity::Even);

    const double scale =
        std::max({1.0, max_abs(F), max_abs(G)});
    const double edge =
        std::max({std::abs(F.values.front()), std::abs(F.values.back()),
                  std::abs(G.values.front()), std::abs(G.values.back())});
    if (edge > 1e-6 * scale)
        throw CancellationFailureError(
            "source_terms: non-decaying source at index (" +
            std::to_string(idx.k) + "," + std::to_string(idx.l) +
            "); a limit constant upstream is inconsistent");
    retag(F);
    retag(G);
    return {F, G};
}

OmegaSolution solve_model_problem(const LinearizedOperator& op,
                                  const SpecialSolutions& specials,
                                  const Profile& F, const Profile& G,
                                  double gamma, double kappa) {
    const Grid& g = op.grid();
    const int n = g.n_points;
    const Nonlinearity& nl = op.nl();
    const SolitonPtr q = op.base_soliton().evaluator;
    const Profile& qprof = op.base_soliton().profile;
    const Profile& lambda_q = op.lambda_q_profile();
    const Profile& phi = op.phi();

    const double lqq = dot(lambda_q, qprof);
    if (std::abs(lqq) < 1e-10)
        throw DegenerateFamilyError(
            "model problem: int LambdaQ Q vanishes, family degenerate");

    const Profile int_p = cumulative_primitive(specials.P);
    const Profile int_pbar = cumulative_primitive(specials.P_bar);
    const double int_P = integrate(specials.P);
    const double int_Pbar = integrate(specials.P_bar);
    const double int_LQ = integrate(lambda_q);

    const double a =
        -(gamma * int_P + dot(G, qprof) - dot(F, int_p)) / lqq;
    const double b = 0.5 * (gamma * int_Pbar + a * int_LQ -
                            dot(F, int_pbar) + integrate(G));

    // Bounded part of A: solve L Hbar = int_{-inf}^x F + gamma f'(Q).
    // The gamma term carries f'(Q) because (L gamma)' = -gamma (f'(Q))'.
    Profile calH = cumulative_primitive(F);
    {
        const double at_end = calH.values.back();
        for (int i = 0; i < n; ++i) {
            const double x = g.x(i);
            calH.values[i] += -at_end + gamma * nl.f(q->value(x), 1);
        }
        symmetrize(calH, Parity::Even);
        retag(calH);
    }
    const Profile hbar = op.invert(calH, Parity::Even);

    OmegaSolution sol;
    sol.gamma = gamma;
    sol.kappa = kappa;
    sol.a = a;
    sol.b = b;
    sol.A = hbar;
    for (int i = 0; i < n; ++i)
        sol.A.values[i] = -a * specials.P_hat.values[i] + hbar.values[i] + gamma;
    sol.A.parity = Parity::Even;
    retag(sol.A);

    // Odd part of B from L B_tilde = int_0^x (D - a Z0) - b L(phi).
    const Profile hbar2 = differentiate(hbar, 2, 8);
    const Profile phat2 = differentiate(specials.P_hat, 2, 8);
    Profile dmz;
    dmz.grid = g;
    dmz.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double fp = op.potential().values[i];
        const double d_i = 3.0 * hbar2.values[i] + fp * hbar.values[i] +
                           G.values[i] + gamma * fp;
        const double z0_i = 3.0 * q->second(g.x(i)) + 3.0 * phat2.values[i] +
                            fp * specials.P_hat.values[i];
        dmz.values[i] = d_i - a * z0_i;
    }
    symmetrize(dmz, Parity::Even);
    Profile e = cumulative_primitive(dmz);
    const Profile lphi = op.apply_phi();
    for (int i = 0; i < n; ++i) e.values[i] -= b * lphi.values[i];
    symmetrize(e, Parity::Odd);
    retag(e);
    // The analytic E is orthogonal to Q'; strip the discretization residue
    // in that direction before inverting (a large component would mean the
    // problem data are genuinely inconsistent).
    {
        Profile qprime = make_profile(
            g, [&](double x) { return q->deriv(x); }, Parity::Odd);
        const double coef = dot(e, qprime) / dot(qprime, qprime);
        if (std::abs(coef) > 1e-5 * std::max(1.0, max_abs(e)))
            throw NotSolvableError(
                "model problem: kernel component of the odd right-hand side "
                "is too large");
        for (int i = 0; i < n; ++i) e.values[i] -= coef * qprime.values[i];
    }
    const Profile btilde = op.invert(e, Parity::Odd);

    sol.B = btilde;
    for (int i = 0; i < n; ++i)
        sol.B.values[i] = btilde.values[i] + b * phi.values[i] +
                          kappa * q->deriv(g.x(i));
    sol.B.parity = Parity::Odd;
    retag(sol.B);

    // Residuals of both defining lines, measured with the wide stencil so
    // the diagnostic is not dominated by differentiation noise.
    {
        auto apply_wide = [&](const Profile& w) {
            Profile w2 = differentiate(w, 2, 8);
            Profile out = w;
            for (int i = 0; i < n; ++i)
                out.values[i] = -w2.values[i] + w.values[i] -
                                op.potential().values[i] * w.values[i];
            return out;
        };
        Profile la1 = differentiate(apply_wide(sol.A), 1, 8);
        Profile r1 = la1;
        for (int i = 0; i < n; ++i) {
            const double x = g.x(i);
            const double three_q_2fq =
                3.0 * q->deriv(x) - 2.0 * nl.f(q->value(x), 1) * q->deriv(x);
            r1.values[i] += a * three_q_2fq - F.values[i];
        }
        sol.residual_first = sup_residual(r1);

        Profile lb1 = differentiate(apply_wide(sol.B), 1, 8);
        Profile a2 = differentiate(sol.A, 2, 8);
        Profile r2 = lb1;
        for (int i = 0; i < n; ++i) {
            r2.values[i] += 3.0 * a * q->second(g.x(i)) - 3.0 * a2.values[i] -
                            op.potential().values[i] * sol.A.values[i] -
                            G.values[i];
        }
        sol.residual_second = sup_residual(r2);
    }
    return sol;
}

namespace {
double gamma_rule(const Nonlinearity& nl, SigmaIndex idx,
                  const CascadeSolution& cas) {
    const int m = nl.m();
    auto b10 = [&] { return cas.at(1, 0).b; };
    if (idx == SigmaIndex{1, 0} || idx == SigmaIndex{2, 0}) {
        if (idx == SigmaIndex{2, 0} && m == 2)
            return -0.5 * b10() * b10();
        return 0.0;
    }
    if (idx == SigmaIndex{1, 1}) return 0.5 * b10() * b10();
    const double d = cas.d_epsilon;
    const double b = b10();
    if (m == 2) {
        const double b11 = cas.at(1, 1).b;
        if (idx == SigmaIndex{3, 0})
            return 5.0 / 36.0 * std::pow(b, 4) + 10.0 / 3.0 * d * b +
                   0.5 * nl.cubic_coef() * b * b;
        if (idx == SigmaIndex{2, 1})
            return std::pow(b, 4) / 24.0 - b * b11 - 4.0 * d * b;
        if (idx == SigmaIndex{1, 2})
            return -3.0 / 24.0 * std::pow(b, 4) + b * b11;
    } else {
        if (idx == SigmaIndex{3, 0}) return -0.5 * b * b;
        if (idx == SigmaIndex{2, 1}) return -4.0 * b * d;
        if (idx == SigmaIndex{4, 0})
            return 3.0 * d * b +
                   (cas.delta_p4 ? 0.5 * nl.epsilon() * b * b : 0.0);
    }
    throw std::invalid_argument("gamma_rule: index outside the retained set");
}
}  // namespace

CascadeSolution solve_cascade(const Nonlinearity& nl, const Grid& grid) {
    return solve_cascade_prefix(nl, grid,
                                static_cast<int>(sigma_indices(nl.m()).size()));
}

CascadeSolution solve_cascade_prefix(const Nonlinearity& nl, const Grid& grid,
                                     int count) {
    if (nl.family() == Family::Custom)
        throw std::invalid_argument(
            "solve_cascade: custom nonlinearities are outside the cascade's "
            "family assumptions");
    CascadeSolution cas;
    cas.nl = nl;
    cas.grid = grid;
    cas.delta_m2 = nl.m() == 2 ? 1 : 0;
    cas.delta_p4 = (nl.m() == 3 && std::abs(nl.p() - 4.0) < 1e-9) ? 1 : 0;
    auto op = std::make_shared<LinearizedOperator>(nl, grid);
    cas.specials =
        std::make_shared<SpecialSolutions>(op->special_solutions());
    cas.op = std::move(op);

    const SolitonPtr q = cas.op->base_soliton().evaluator;
    Profile qprime = make_profile(
        grid, [&](double x) { return q->deriv(x); }, Parity::Odd);
    const double phi_qp = dot(cas.op->phi(), qprime);
    const double qp_qp = dot(qprime, qprime);

    const std::vector<SigmaIndex> order = sigma_indices(nl.m());
    count = std::clamp<int>(count, 0, static_cast<int>(order.size()));
    for (int step = 0; step < count; ++step) {
        const SigmaIndex idx = order[step];
        auto [F, G] = source_terms(nl, idx, cas);
        const double gamma = gamma_rule(nl, idx, cas);
        OmegaSolution sol =
            solve_model_problem(*cas.op, *cas.specials, F, G, gamma, 0.0);
        if (idx == SigmaIndex{1, 0}) {
            // Fix the kernel weight so that int B Q' = 0.
            const double kappa = -sol.b * phi_qp / qp_qp;
            for (int i = 0; i < grid.n_points; ++i)
                sol.B.values[i] += kappa * qprime.values[i];
            sol.kappa = kappa;
        }
        cas.solutions[{idx.k, idx.l}] = std::move(sol);
        if (idx == SigmaIndex{2, 0}) {
            const double b10 = cas.at(1, 0).b;
            cas.d_epsilon = cas.at(2, 0).b +
                            (cas.delta_m2 ? std::pow(b10, 3) / 6.0 : 0.0);
        }
        if (idx == SigmaIndex{1, 1}) {
            const double b10 = cas.at(1, 0).b;
            cas.b_tilde_11 = cas.at(1, 1).b - std::pow(b10, 3) / 6.0;
        }
    }
    return cas;
}

CascadeSolution solve_cascade(const Nonlinearity& nl) {
    return solve_cascade(nl, default_grid(1.0));
}

double defect(const CascadeSolution& cascade) {
    const double b20 = cascade.at(2, 0).b;
    const double b10 = cascade.at(1, 0).b;
    return b20 + (cascade.delta_m2 ? std::pow(b10, 3) / 6.0 : 0.0);
}

double b20_closed_integrals(const Nonlinearity& nl,
                            const CascadeSolution& partial) {
    const OmegaSolution& s10 = partial.at(1, 0);
    return b20_closed_from_profiles(nl, partial.op->base_soliton().evaluator,
                                    partial.op->grid(), s10.A, s10.B, s10.a,
                                    s10.b);
}

double b20_closed_from_profiles(const Nonlinearity& nl, const SolitonPtr& q,
                                const Grid& g, const Profile& A,
                                const Profile& B, double a, double b) {
    const int n = g.n_points;

    const Profile A1 = differentiate(A, 1, 8);
    const Profile A2 = differentiate(A, 2, 8);
    std::vector<double> w(n);
    auto quad = [&] { return simpson(w, g.spacing); };

    if (nl.m() == 3) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double qi = q->value(g.x(i));
            const double one_a = 1.0 + A.values[i];
            w[i] = 0.25 * nl.f(qi, 2) * one_a * one_a * one_a;
        }
        acc += quad();
        for (int i = 0; i < n; ++i) {
            const double qi = q->value(g.x(i));
            w[i] = nl.f(qi, 1) * (1.0 + A.values[i]) * A.values[i];
        }
        acc += -0.75 * a * quad();
        for (int i = 0; i < n; ++i) w[i] = A1.values[i] * A1.values[i];
        acc += 2.25 * a * quad();
        for (int i = 0; i < n; ++i) {
            const double qi = q->value(g.x(i));
            w[i] = nl.f(qi, 1) * qi * (1.0 + A.values[i]);
        }
        acc += -0.5 * a * a * quad();
        for (int i = 0; i < n; ++i)
            w[i] = A.values[i] * q->second(g.x(i));
        acc += 3.0 * a * a * quad();
        for (int i = 0; i < n; ++i) {
            const double qp = q->deriv(g.x(i));
            w[i] = qp * qp;
        }
        acc += -0.75 * a * a * a * quad();
        return acc;
    }

    // m = 2
    Profile a_plus_aq = A;
    for (int i = 0; i < n; ++i)
        a_plus_aq.values[i] = A.values[i] + a * q->value(g.x(i));
    a_plus_aq.parity = Parity::Even;
    const Profile int_a_aq = cumulative_primitive(a_plus_aq);

    double acc = -0.5 * std::pow(b, 3) - 2.0 * b;
    for (int i = 0; i < n; ++i) {
        const double qi = q->value(g.x(i));
        const double one_a = 1.0 + A.values[i];
        w[i] = 0.25 * (nl.f(qi, 2) - 2.0) * one_a * one_a * one_a;
    }
    acc += quad();
    for (int i = 0; i < n; ++i)
        w[i] = 0.5 * A.values[i] * (1.0 + A.values[i] * A.values[i]);
    acc += quad();
    for (int i = 0; i < n; ++i)
        w[i] = q->value(g.x(i)) * A.values[i];
    acc += -0.5 * a * quad();
    for (int i = 0; i < n; ++i) {
        const double qp = q->deriv(g.x(i));
        w[i] = qp * qp;
    }
    acc += -0.75 * a * a * a * quad();
    for (int i = 0; i < n; ++i) {
        const double qi = q->value(g.x(i));
        w[i] = qi * (qi - nl.f(qi, 1) * (1.0 + A.values[i]));
    }
    acc += 0.5 * a * a * quad();
    for (int i = 0; i < n; ++i) {
        const double qi = q->value(g.x(i));
        w[i] = (nl.f(qi, 1) * (1.0 + A.values[i]) + 3.0 * A2.values[i]) *
               A.values[i];
    }
    acc += -0.75 * a * quad();
    for (int i = 0; i < n; ++i) {
        const double qi = q->value(g.x(i));
        w[i] = B.values[i] * (3.0 * A1.values[i] +
                              nl.f(qi, 1) * int_a_aq.values[i]);
    }
    acc += 0.5 * quad();
    for (int i = 0; i < n; ++i)
        w[i] = q->second(g.x(i)) * A.values[i];
    acc += 3.0 * a * a * quad();
    return acc;
}

double cascade_consistency_residual(const CascadeSolution& cascade) {
    const Expansion S = build_decomposition(cascade.nl, cascade);
    double r = 0.0;
    r = std::max(r, max_abs(S.coefficient(0, 0, 0)));
    for (const SigmaIndex idx : sigma_indices(cascade.nl.m())) {
        r = std::max(r, max_abs(S.coefficient(idx.k, idx.l, 0)));
        r = std::max(r, max_abs(S.coefficient(idx.k, idx.l, 1)));
    }
    return r;
}

std::string CascadeSolution::to_json() const {
    nlohmann::json j;
    j["m"] = nl.m();
    j["epsilon"] = nl.epsilon();
    j["p"] = nl.p();
    nlohmann::json coeffs;
    coeffs["a_1_0"] = at(1, 0).a;
    coeffs["b_1_0"] = at(1, 0).b;
    coeffs["b_2_0"] = at(2, 0).b;
    coeffs["d"] = d_epsilon;
    nlohmann::json gamma;
    for (const auto& [kl, sol] : solutions)
        gamma[std::to_string(kl.first) + "_" + std::to_string(kl.second)] =
            sol.gamma;
    coeffs["gamma"] = gamma;
    j["coeffs"] = coeffs;
    return j.dump(2);
}

}  // namespace gkdv
