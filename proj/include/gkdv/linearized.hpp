#pragma once

#include <memory>

#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

struct EigenPair {
    double lambda0 = 0.0;  // L chi0 = -lambda0 chi0, lambda0 > 0
    Profile chi0;          // positive, even, unit L2 norm
};

// Even localized solutions of L P = 3Q'' + f'(Q)Q, L P_hat = 3Q - 2f(Q),
// L P_bar = f'(Q). P and P_hat have closed forms in xQ', LambdaQ and Q.
struct SpecialSolutions {
    Profile P;
    Profile P_hat;
    Profile P_bar;
};

// The operator L w = -w'' + w - f'(Q) w around the speed-1 soliton.
// Assembly happens once; inversions share a cached factorization of the
// bordered system (L w + lambda Q' = h, int w Q' = 0) that removes the
// kernel span{Q'}.
class LinearizedOperator {
  public:
    LinearizedOperator(const Nonlinearity& nl, const Grid& grid);
    ~LinearizedOperator();
    LinearizedOperator(LinearizedOperator&&) noexcept;
    LinearizedOperator& operator=(LinearizedOperator&&) noexcept;

    const Nonlinearity& nl() const { return nl_; }
    const Grid& grid() const { return grid_; }
    const SolitonProfile& base_soliton() const { return q_; }
    const Profile& potential() const { return potential_; }

    Profile apply(const Profile& w) const;

    // Unique solution of L w = h with int w Q' = 0 and the parity of h.
    // For odd h the compatibility int h Q' = 0 is checked first.
    Profile invert(const Profile& h, Parity parity) const;

    EigenPair ground_state() const;
    SpecialSolutions special_solutions() const;

    const Profile& lambda_q_profile() const;  // dQ_c/dc at c=1
    const Profile& phi() const;               // -Q'/Q, odd, limits +-1
    Profile apply_phi() const;                // L(phi), evaluated exactly

    double quadrature(const Profile& p) const { return integrate(p); }

  private:
    struct Impl;
    Nonlinearity nl_;
    Grid grid_;
    SolitonProfile q_;
    Profile potential_;
    mutable Profile lambda_q_cache_;
    mutable Profile phi_cache_;
    mutable bool lambda_q_ready_ = false;
    mutable bool phi_ready_ = false;
    std::unique_ptr<Impl> impl_;
};

Profile resonance_phi(const SolitonProfile& q);

}  // namespace gkdv
