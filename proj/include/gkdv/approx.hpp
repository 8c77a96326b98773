#pragma once

#include <functional>
#include <memory>

#include "gkdv/grid.hpp"
#include "gkdv/omega.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

enum class ApproxVariant { Symmetric, Modified };

struct ShiftObservables {
    double delta1 = 0.0;  // sum over retained indices of a_{k,l} c^l int Qc^k
    double delta2 = 0.0;  // 2(b_{1,0} + c btilde_{1,1} delta_m2)
};

// The two-soliton collision ansatz: u = Q(y) + Qc(y_c) + sum over retained
// indices of c^l [Qc^k(y_c) A_{k,l}(y) + (Qc^k)'(y_c) B_{k,l}(y)] with
// y_c = x + (1-c)t and y = x - alpha(y_c). The modified variant adds
// -d (Qc^2)'(y_c)(1 + P_bar(y)), which removes the outgoing residue on the
// incoming side and doubles it on the outgoing one.
//
// Profiles are kept as half-line tables and evaluated through their exact
// parity, so the symmetric variant obeys u(t,x) = u(-t,-x) to the last bit
// on mirrored grid points.
class ApproxSolution {
  public:
    ApproxSolution(CascadeSolution cascade, double c, ApproxVariant variant);
    ~ApproxSolution();
    ApproxSolution(ApproxSolution&&) noexcept;

    const CascadeSolution& cascade() const { return cascade_; }
    double c() const { return c_; }
    ApproxVariant variant() const { return variant_; }
    double interaction_time() const { return t_c_; }  // c^{-1/2-1/100}
    double defect_value() const;

    // (beta, alpha) at the small-soliton coordinate s.
    std::pair<double, double> beta_alpha(double s) const;

    double value(double t, double x) const;
    Profile eval(double t, const Grid& grid) const;

    ShiftObservables shifts() const;

  private:
    CascadeSolution cascade_;
    double c_;
    ApproxVariant variant_;
    double t_c_;
    struct Tables;
    std::unique_ptr<Tables> tables_;
};

// Pointwise residual u_t + (u_xx - u + f(u))_x of a time-indexed family,
// with a central difference of half width delta_t in time.
Profile residual_S(const Nonlinearity& nl,
                   const std::function<Profile(double)>& u_of_t, double t,
                   double delta_t);

// Max over n_times samples in [-Tc, Tc] of the H1 norm of the residual.
double residual_h1_max(const ApproxSolution& approx, const Grid& grid,
                       int n_times = 41);

// Evaluation grid wide enough for the whole interaction window.
Grid approx_eval_grid(double c, double target_spacing = 0.025);

}  // namespace gkdv
