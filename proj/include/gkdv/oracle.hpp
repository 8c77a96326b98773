#pragma once

#include <string>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/omega.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

// Closed-form leading coefficient of the defect in epsilon:
//   m=2: -[(p-3)(2p-1)(24-23p+3p^2+2p^3) / (36(p^2-1)(p-2))] int (Q0)^p
//   m=3: -[(p-1)(p-3)(p^2-3p+8) / (8(p-2)(p+1))] int (Q0)^p
// Zero exactly at p=3 for both, negative for p > 3.
double leading_coefficient(int m, double p);

// int_R (Q0)^p for the speed-1 soliton of exponent m. Integer p by the
// two-term recursions from int Q0 = 6 (m=2) and int (Q0)^2 = 4 (m=3);
// non-integer p by direct quadrature.
double sech_power_integral(int m, double p);

// Closed-form zeroth-order solution of the first linear system for the
// cubic-perturbed quadratic nonlinearity f = s^2 - mu s^3.
struct GardnerZerothOrder {
    double a10 = 2.0 / 3.0;
    Profile A10;
    Profile B10;
    double b10 = -2.0;
    double kappa10 = 0.0;
};

GardnerZerothOrder gardner_zeroth(double mu_tilde,
                                  const Grid& grid = default_grid(1.0));

// First-order expansion around the pure power: Q1 solves L0 Q1 = (Q0)^p.
struct FirstOrderExpansion {
    Profile Q1;
    Profile LambdaQ1;
    double a10_1 = 0.0;
    double b10_1 = 0.0;
};

FirstOrderExpansion first_order_expansion(int m, double p,
                                          const Grid& grid = default_grid(1.0));

// Epsilon-slope of a_{1,0}: closed form for m=2, quadrature route for m=3.
double a10_first_order(int m, double p);

// Defect of f = s^2 - mu s^3 evaluated through the closed integral chain;
// vanishes identically for every admissible mu.
double gardner_defect_chain(double mu_tilde);

// One row of the oracle-versus-cascade comparison.
struct OracleComparison {
    int m = 2;
    double p = 4.0;
    double c_mp = 0.0;            // closed-form coefficient
    double pipeline_slope = 0.0;  // extrapolated d(eps)/eps from the cascade
    double rel_error = 0.0;
};

// Runs the cascade at eps, eps/2, eps/4 and Richardson-extrapolates the
// slope of d against the closed form.
OracleComparison compare_defect_slope(int m, double p, double eps0 = 1e-3);
std::vector<OracleComparison> oracle_comparison_table(
    const std::vector<std::pair<int, double>>& cases, double eps0 = 1e-3);
void write_oracle_csv(const std::string& path,
                      const std::vector<OracleComparison>& rows);

}  // namespace gkdv
