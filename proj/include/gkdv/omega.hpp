#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/linearized.hpp"
#include "gkdv/nonlinearity.hpp"

namespace gkdv {

// Index (k,l) of one correction pair (A_{k,l}, B_{k,l}). For m=2 the
// retained set is {(1,0),(1,1),(2,0),(2,1),(1,2),(3,0)}; for m=3 it is
// {(1,0),(1,1),(2,0),(2,1),(3,0),(4,0)}.
struct SigmaIndex {
    int k = 1;
    int l = 0;
    auto operator<=>(const SigmaIndex&) const = default;
};

// Retained indices in a valid solving order.
std::vector<SigmaIndex> sigma_indices(int m);
// Strict partial order: (k',l') precedes (k,l) iff (k'<k and l'<=l) or
// (k'<=k and l'<l).
bool sigma_precedes(SigmaIndex a, SigmaIndex b);

// One solved linear pair: A = A_tilde + gamma with A_tilde localized even,
// B = B_tilde + b phi + kappa Q' with B_tilde localized odd. The stored
// residuals are the sup norms of the two defining lines.
struct OmegaSolution {
    Profile A;
    Profile B;
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
    double residual_first = 0.0;
    double residual_second = 0.0;
};

struct CascadeSolution {
    Nonlinearity nl;
    Grid grid;
    std::shared_ptr<const LinearizedOperator> op;
    std::shared_ptr<const SpecialSolutions> specials;
    std::map<std::pair<int, int>, OmegaSolution> solutions;
    double d_epsilon = 0.0;   // b_{2,0} + delta_m2 b_{1,0}^3 / 6
    double b_tilde_11 = 0.0;  // b_{1,1} - b_{1,0}^3 / 6
    int delta_m2 = 0;
    int delta_p4 = 0;

    bool has(int k, int l) const;
    const OmegaSolution& at(int k, int l) const;
    double coeff_a(int k, int l) const { return at(k, l).a; }
    double coeff_b(int k, int l) const { return at(k, l).b; }
    std::string to_json() const;
};

// Solve (L A)' + a(3Q - 2f(Q))' = F, (L B)' + 3aQ'' - 3A'' - f'(Q)A = G
// for given limits gamma (of A) and kernel weight kappa (of B). F must be
// odd localized, G even localized.
OmegaSolution solve_model_problem(const LinearizedOperator& op,
                                  const SpecialSolutions& specials,
                                  const Profile& F, const Profile& G,
                                  double gamma, double kappa);

// Source terms of the (k,l) system from the already-solved lower indices.
// Throws OrderViolationError when a predecessor is missing and
// CancellationFailureError when a limit constant upstream leaves the
// output non-localized.
std::pair<Profile, Profile> source_terms(const Nonlinearity& nl,
                                         SigmaIndex idx,
                                         const CascadeSolution& prior);

CascadeSolution solve_cascade(const Nonlinearity& nl);
CascadeSolution solve_cascade(const Nonlinearity& nl, const Grid& grid);

// Solve only the first `count` indices of the solving order; count = 2
// gives (1,0) and (2,0), enough for the defect.
CascadeSolution solve_cascade_prefix(const Nonlinearity& nl, const Grid& grid,
                                     int count);

// b_{2,0} + delta_m2 b_{1,0}^3 / 6; needs (1,0) and (2,0) solved.
double defect(const CascadeSolution& cascade);

// b_{2,0} evaluated directly from the closed integral formulas, using only
// the (1,0) solution; an independent cross-check of the cascade pipeline.
double b20_closed_integrals(const Nonlinearity& nl,
                            const CascadeSolution& partial);

// Same formulas fed with externally supplied first-system data.
double b20_closed_from_profiles(const Nonlinearity& nl, const SolitonPtr& q,
                                const Grid& grid, const Profile& A,
                                const Profile& B, double a, double b);

// Max over retained buckets of the rebuilt decomposition residual; all
// buckets vanish once every retained index is solved.
double cascade_consistency_residual(const CascadeSolution& cascade);

}  // namespace gkdv
