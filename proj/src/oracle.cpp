#include "gkdv/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gkdv/errors.hpp"
#include "gkdv/linearized.hpp"

namespace gkdv {

namespace {
bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

double quadrature_power(int m, double p) {
    const SolitonPtr q = power_soliton(m, 1.0);
    const Grid g = default_grid(1.0);
    Profile qp = make_profile(
        g, [&](double x) { return std::pow(q->value(x), p); }, Parity::Even);
    return integrate(qp);
}
}  // namespace

double sech_power_integral(int m, double p) {
    if (m != 2 && m != 3)
        throw std::invalid_argument("sech_power_integral: m must be 2 or 3");
    if (p < 1.0)
        throw std::invalid_argument("sech_power_integral: p must be >= 1");
    if (!is_integer(p)) return quadrature_power(m, p);
    const int ip = static_cast<int>(std::llround(p));
    if (m == 2) {
        // int (Q0)^{k+1} = (3k/(2k+1)) int (Q0)^k from int Q0 = 6.
        double val = 6.0;
        for (int k = 1; k < ip; ++k) val *= 3.0 * k / (2.0 * k + 1.0);
        return val;
    }
    // m = 3: int (Q0)^{k+2} = (2k/(1+k)) int (Q0)^k, even ladder from
    // int (Q0)^2 = 4, odd ladder from int Q0 = sqrt(2) pi.
    double val = (ip % 2 == 0) ? 4.0 : std::sqrt(2.0) * M_PI;
    for (int k = (ip % 2 == 0) ? 2 : 1; k < ip; k += 2)
        val *= 2.0 * k / (1.0 + k);
    return val;
}

double leading_coefficient(int m, double p) {
    if (p < 3.0)
        throw std::invalid_argument("leading_coefficient: p must be >= 3");
    const double I = sech_power_integral(m, p);
    if (m == 2) {
        const double num =
            (p - 3.0) * (2.0 * p - 1.0) *
            (24.0 - 23.0 * p + 3.0 * p * p + 2.0 * p * p * p);
        return -num / (36.0 * (p * p - 1.0) * (p - 2.0)) * I;
    }
    if (m == 3) {
        const double num = (p - 1.0) * (p - 3.0) * (p * p - 3.0 * p + 8.0);
        return -num / (8.0 * (p - 2.0) * (p + 1.0)) * I;
    }
    throw std::invalid_argument("leading_coefficient: m must be 2 or 3");
}

GardnerZerothOrder gardner_zeroth(double mu_tilde, const Grid& grid) {
    if (mu_tilde >= 2.0 / 9.0)
        throw NoSolitonError("gardner_zeroth: need mu < 2/9 at speed 1");
    const SolitonPtr q = gardner_soliton(mu_tilde, 1.0);
    GardnerZerothOrder z;
    z.a10 = 2.0 / 3.0;
    z.b10 = -2.0;
    z.A10 = make_profile(
        grid,
        [&](double x) {
            const double Qv = q->value(x);
            return -4.0 / 3.0 * Qv + mu_tilde * Qv * Qv;
        },
        Parity::Even);
    Profile phi = make_profile(
        grid, [&](double x) { return -q->deriv(x) / q->value(x); },
        Parity::Odd);
    Profile qprime = make_profile(
        grid, [&](double x) { return q->deriv(x); }, Parity::Odd);
    // Kernel weight pinned by int B Q' = 0. (The closed ratio of moment
    // integrals degenerates to 0/0 at mu = 0; this route does not.)
    auto dotp = [&](const Profile& a, const Profile& b) {
        std::vector<double> w(grid.n_points);
        for (int i = 0; i < grid.n_points; ++i)
            w[i] = a.values[i] * b.values[i];
        return simpson(w, grid.spacing);
    };
    z.kappa10 = 2.0 * dotp(phi, qprime) / dotp(qprime, qprime);
    z.B10 = make_profile(
        grid,
        [&](double x) {
            return 2.0 * q->deriv(x) / q->value(x) + z.kappa10 * q->deriv(x);
        },
        Parity::Odd);
    return z;
}

FirstOrderExpansion first_order_expansion(int m, double p, const Grid& grid) {
    if (p < 3.0)
        throw std::invalid_argument("first_order_expansion: p must be >= 3");
    const Nonlinearity base = Nonlinearity::pure_power(m);
    const LinearizedOperator op(base, grid);
    const SolitonPtr q0 = op.base_soliton().evaluator;
    const int n = grid.n_points;

    Profile rhs = make_profile(
        grid, [&](double x) { return std::pow(q0->value(x), p); },
        Parity::Even);
    FirstOrderExpansion fo;
    fo.Q1 = op.invert(rhs, Parity::Even);

    const Profile& lq0 = op.lambda_q_profile();
    Profile rhs_lq;
    rhs_lq.grid = grid;
    rhs_lq.values.resize(n);
    if (m == 3) {
        for (int i = 0; i < n; ++i) {
            const double Qv = q0->value(grid.x(i));
            rhs_lq.values[i] =
                (6.0 * Qv * lq0.values[i] - 1.0) * fo.Q1.values[i] +
                p * std::pow(Qv, p - 1.0) * lq0.values[i];
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double Qv = q0->value(grid.x(i));
            rhs_lq.values[i] =
                -fo.Q1.values[i] +
                (2.0 * fo.Q1.values[i] + p * std::pow(Qv, p - 1.0)) *
                    lq0.values[i];
        }
    }
    rhs_lq.parity = Parity::Even;
    retag(rhs_lq);
    fo.LambdaQ1 = op.invert(rhs_lq, Parity::Even);

    if (m == 2) {
        fo.a10_1 = -(p - 3.0) * (2.0 * p - 1.0) / (9.0 * (p + 1.0)) *
                   sech_power_integral(2, p);
    } else {
        // int LambdaQ1 via the projected identity; only Q1 is needed and
        // int LambdaQ0 Q0 = 1 normalizes the ratio away.
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) {
            const double Qv = q0->value(grid.x(i));
            const double lq = lq0.values[i];
            w[i] = (-1.0 + Qv * Qv + 6.0 * Qv * lq -
                    6.0 * Qv * Qv * Qv * lq) *
                       fo.Q1.values[i] +
                   p * std::pow(Qv, p - 1.0) * lq * (1.0 - Qv * Qv);
        }
        fo.a10_1 = simpson(w, grid.spacing);
    }

    // First-order piece of A_{1,0} from the integrated first line, then
    // b_{1,0} = (a int Q + int A)/2 differentiated in epsilon.
    Profile rhs_a1;
    rhs_a1.grid = grid;
    rhs_a1.values.resize(n);
    if (m == 2) {
        for (int i = 0; i < n; ++i) {
            const double Qv = q0->value(grid.x(i));
            rhs_a1.values[i] =
                -fo.a10_1 * (3.0 * Qv - 2.0 * Qv * Qv) +
                p * std::pow(Qv, p - 1.0) -
                4.0 / 3.0 * (p - 1.0) * std::pow(Qv, p);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double Qv = q0->value(grid.x(i));
            rhs_a1.values[i] =
                -fo.a10_1 * (3.0 * Qv - 2.0 * std::pow(Qv, 3)) +
                (6.0 * Qv * fo.Q1.values[i] + p * std::pow(Qv, p - 1.0)) *
                    (1.0 - Qv * Qv);
        }
    }
    rhs_a1.parity = Parity::Even;
    retag(rhs_a1);
    const Profile a101 = op.invert(rhs_a1, Parity::Even);
    const double int_Q0 = sech_power_integral(m, 1.0);
    const double a0 = (m == 2) ? 2.0 / 3.0 : 0.0;
    fo.b10_1 = 0.5 * (fo.a10_1 * int_Q0 + integrate(a101)) +
               0.5 * a0 * integrate(fo.Q1);
    return fo;
}

double a10_first_order(int m, double p) {
    if (p < 3.0)
        throw std::invalid_argument("a10_first_order: p must be >= 3");
    if (m == 2)
        return -(p - 3.0) * (2.0 * p - 1.0) / (9.0 * (p + 1.0)) *
               sech_power_integral(2, p);
    return first_order_expansion(3, p).a10_1;
}

double gardner_defect_chain(double mu_tilde) {
    const Grid grid = default_grid(1.0);
    const GardnerZerothOrder z = gardner_zeroth(mu_tilde, grid);
    const Nonlinearity nl = Nonlinearity::gardner(mu_tilde);
    const SolitonPtr q = gardner_soliton(mu_tilde, 1.0);
    const double b20 =
        b20_closed_from_profiles(nl, q, grid, z.A10, z.B10, z.a10, z.b10);
    return b20 + std::pow(z.b10, 3) / 6.0;
}

OracleComparison compare_defect_slope(int m, double p, double eps0) {
    OracleComparison row;
    row.m = m;
    row.p = p;
    row.c_mp = leading_coefficient(m, p);
    double slopes[3];
    double eps = eps0;
    for (int i = 0; i < 3; ++i) {
        const CascadeSolution cas = solve_cascade_prefix(
            Nonlinearity::epsilon_family(m, eps, p), default_grid(1.0), 2);
        slopes[i] = defect(cas) / eps;
        eps *= 0.5;
    }
    row.pipeline_slope = (8.0 * slopes[2] - 6.0 * slopes[1] + slopes[0]) / 3.0;
    row.rel_error = std::abs(row.pipeline_slope - row.c_mp) /
                    std::max(1e-300, std::abs(row.c_mp));
    return row;
}

std::vector<OracleComparison> oracle_comparison_table(
    const std::vector<std::pair<int, double>>& cases, double eps0) {
    std::vector<OracleComparison> rows;
    rows.reserve(cases.size());
    for (const auto& [m, p] : cases)
        rows.push_back(compare_defect_slope(m, p, eps0));
    return rows;
}

void write_oracle_csv(const std::string& path,
                      const std::vector<OracleComparison>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_oracle_csv: cannot open " + path);
    out << "m,p,c_mp,pipeline_slope,rel_error\n";
    char buf[160];
    for (const OracleComparison& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.m,
                      r.p, r.c_mp, r.pipeline_slope, r.rel_error);
        out << buf;
    }
}

}  // namespace gkdv
