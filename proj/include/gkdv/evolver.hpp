#pragma once

#include <functional>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"

namespace gkdv {

enum class Integrator { Etdrk4, Ifrk4 };

// Periodic Fourier pseudospectral discretization of
// u_t + (u_xx + f(u))_x = 0 on [-L, L). Fields are exchanged as Profiles
// with n_modes + 1 nodes, both endpoints included (the right endpoint
// duplicates the left one).
struct EvolverConfig {
    double domain_half_length = 50.0;
    int n_modes = 1024;  // power of two
    double dt = 2e-3;
    bool dealias = true;
    Integrator integrator = Integrator::Etdrk4;
    double blowup_threshold = 1e6;
};

struct EvolutionState {
    double t = 0.0;
    Profile u;
    double mass = 0.0;
    double energy = 0.0;
    bool seam_warning = false;
};

// Evolve u0 to t_final, reporting states at the requested checkpoint times
// (always including t_final). Throws DivergenceError carrying the last
// good time when the field blows up or turns non-finite.
std::vector<EvolutionState> evolve(const Nonlinearity& nl, const Profile& u0,
                                   double t_final, const EvolverConfig& cfg,
                                   const std::vector<double>& checkpoints);

std::vector<EvolutionState> evolve(const Nonlinearity& nl, const Profile& u0,
                                   double t_final, const EvolverConfig& cfg,
                                   int n_checkpoints = 50);

// Mass int u^2 and energy 1/2 int u_x^2 - int F(u) on the periodic grid.
std::pair<double, double> conserved(const Nonlinearity& nl, const Profile& u);

// Grid matching the evolver's field layout.
Grid periodic_grid(double half_length, int n_modes);

// Sample a sum of soliton placements on the evolver grid.
struct SolitonPlacement {
    double c = 1.0;
    double x0 = 0.0;
    double sign = 1.0;
};
Profile place_solitons(const Nonlinearity& nl,
                       const std::vector<SolitonPlacement>& placements,
                       const Grid& grid);

// Localized monotonicity functional
//   G(t) = a/2 int u^2 (1 - psi(x - m(t))) + 1/2 int (u_x^2 - 2F(u)) (1 - psi)
// with psi(x) = (2/pi) arctan(exp(x/kappa)).
std::vector<double> monotonicity_G(const Nonlinearity& nl,
                                   const std::vector<EvolutionState>& states,
                                   double kappa, double a,
                                   const std::function<double(double)>& midpoint);

double cutoff_psi(double x, double kappa);

}  // namespace gkdv
