#pragma once

#include <memory>

#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"

namespace gkdv {

// Pointwise evaluator for the traveling-wave profile Q_c of
// Q_c'' + f(Q_c) = c Q_c. Derivatives come from the first integral
// Q_c'^2 = c Q_c^2 - 2F(Q_c) and the equation itself, so no finite
// differencing is involved.
class SolitonEvaluator {
  public:
    SolitonEvaluator(Nonlinearity nl, double c) : nl_(std::move(nl)), c_(c) {}
    virtual ~SolitonEvaluator() = default;

    virtual double value(double x) const = 0;

    // First derivative through the first integral by default; backends may
    // override when that form amplifies noise near the apex.
    virtual double deriv(double x) const;
    double second(double x) const;
    double third(double x) const;

    double c() const { return c_; }
    const Nonlinearity& nl() const { return nl_; }

  protected:
    Nonlinearity nl_;
    double c_;
};

using SolitonPtr = std::shared_ptr<const SolitonEvaluator>;

// Closed form c^{1/(m-1)} ((m+1)/2)^{1/(m-1)} sech^{2/(m-1)}((m-1)sqrt(c)x/2).
SolitonPtr power_soliton(int m, double c);
// Closed form 3c / (1 + rho cosh(sqrt(c) x)), rho = sqrt(1 - 9 mu c / 2).
SolitonPtr gardner_soliton(double mu, double c);
// Turning-point construction for a general admissible nonlinearity.
SolitonPtr turning_point_soliton(const Nonlinearity& nl, double c);
// Dispatch to the cheapest valid backend.
SolitonPtr make_soliton_evaluator(const Nonlinearity& nl, double c);

struct SolitonProfile {
    Profile profile;
    double c = 1.0;
    double amplitude = 0.0;
    Nonlinearity nl;
    SolitonPtr evaluator;
};

SolitonProfile soliton_profile(const Nonlinearity& nl, double c,
                               const Grid& grid);

// Suggested grid for speed-c objects: half length 40/sqrt(c).
Grid default_grid(double c = 1.0, int n_points = 4096);

// dQ_c/dc at c = 1 by fourth-order central differencing in c (step 1e-4).
Profile lambda_q(const Nonlinearity& nl, const Grid& grid);

// d/dc of the mass int Q_c^2 along the family.
double stability_derivative(const Nonlinearity& nl, double c);

// int_R Q_c^k for real k >= 1.
double soliton_power_integral(const Nonlinearity& nl, double c, double k);

}  // namespace gkdv
