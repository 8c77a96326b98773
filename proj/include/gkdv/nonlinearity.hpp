#pragma once

#include <string>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

enum class Family { PurePower, Gardner, EpsilonFamily, Custom };

// One term coef * s^expo of the nonlinearity. Non-integer exponents act as
// coef * sign(s) |s|^expo so the odd extension stays continuous.
struct Monomial {
    double coef = 0.0;
    double expo = 0.0;
};

// The nonlinearity f of u_t + (u_xx + f(u))_x = 0, kept as an exact list of
// monomials. The supported families:
//   pure_power      f(s) = s^m,                    m in {2,3}
//   gardner         f(s) = s^2 - mu s^3
//   epsilon_family  f(s) = s^2 + mu_hat eps^{1/(p-2)} s^3 + eps s^p   (m=2)
//                   f(s) = s^3 + eps s^p                              (m=3)
//   custom          any monomial list with leading power m
class Nonlinearity {
  public:
    Nonlinearity() : monomials_{{1.0, 2.0}} {}  // quadratic by default

    static Nonlinearity pure_power(int m);
    static Nonlinearity gardner(double mu);
    static Nonlinearity epsilon_family(int m, double epsilon, double p,
                                       double mu_hat = 0.0);
    static Nonlinearity custom(int m, std::vector<Monomial> monomials);

    int m() const { return m_; }
    double epsilon() const { return epsilon_; }
    double mu_hat() const { return mu_hat_; }
    double p() const { return p_; }
    Family family() const { return family_; }
    // Effective cubic coefficient (epsilon family) or -mu (Gardner).
    double cubic_coef() const;
    double gardner_mu() const;
    const std::vector<Monomial>& monomials() const { return monomials_; }

    // f^{(order)}(s), order in 0..4.
    double f(double s, int order = 0) const;
    // F(s) = int_0^s f, closed form.
    double F(double s) const;

    std::string to_json() const;
    static Nonlinearity from_json(const std::string& text);

  private:
    int m_ = 2;
    double epsilon_ = 0.0;
    double mu_hat_ = 0.0;
    double p_ = 4.0;
    Family family_ = Family::PurePower;
    std::vector<Monomial> monomials_;
};

double eval_f(const Nonlinearity& nl, double s, int order);
double primitive_F(const Nonlinearity& nl, double s);

}  // namespace gkdv
