#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkdv/evolver.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"

namespace gkdv {

// Two-soliton experiment: speeds 1 and c, launched with the given
// separation, evolved through the collision and measured after settling.
struct ExperimentConfig {
    ExperimentConfig() {
        evolver.domain_half_length = 0.0;  // auto-sized to the run
        evolver.dt = 0.0;                  // defaults to 5e-3
        evolver.n_modes = 4096;
    }

    Nonlinearity nl;
    double c = 0.2;
    double initial_separation = 0.0;  // defaults to 20/sqrt(c)
    EvolverConfig evolver;            // domain auto-sized when <= 0
    double window_slope = 0.1;        // exclusion slope of the tail window
    double settle_factor = 2.5;       // settle time over collision time
    int checkpoints = 120;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

struct FitResult {
    double c_est = 0.0;
    double x_est = 0.0;
};

// Locate one soliton inside [lo, hi]: parabolic peak refinement, amplitude
// inversion of c -> Qc(0), then a joint least-squares pass in (c, shift).
FitResult fit_soliton(const Profile& u, const Nonlinearity& nl, double lo,
                      double hi);

enum class Classification { Unclassified, ElasticWithinFloor, Inelastic };

struct CollisionPrediction {
    double q = 0.0;               // 2/(m-1) + 1/4
    double residual_lower = 0.0;  // |eps| c^{q+1/2}
    double residual_upper = 0.0;  // |eps| c^{q}
    double c1_gain_lower = 0.0;   // eps^2 c^{2q+1}
    double c1_gain_upper = 0.0;   // eps^2 c^{2q}
    double delta1 = 0.0;
    double delta2 = 0.0;
    double d = 0.0;
    bool asymptotic_regime = false;  // c <= |eps|^{m-1+1/25}
};

struct CollisionReport {
    double c1_pre = 0.0, c2_pre = 0.0;    // incoming fits
    double c1_plus = 0.0, c2_plus = 0.0;  // outgoing fits
    double shift1 = 0.0, shift2 = 0.0;    // vs free flight
    double residual_h1_weighted = 0.0;    // radiation window
    std::vector<double> tail_norm_trend;  // behind-the-solitons window
    double floor = -1.0;
    Classification classification = Classification::Unclassified;
    CollisionPrediction predicted;
    double measure_time = 0.0;
    double mass_drift = 0.0, energy_drift = 0.0;
    bool seam_warning = false;

    std::string to_json() const;
};

struct TrajectorySample {
    double t = 0.0, mass = 0.0, energy = 0.0;
    double peak1_x = 0.0, peak1_amp = 0.0;
    double peak2_x = 0.0, peak2_amp = 0.0;
};

CollisionReport run_collision(const ExperimentConfig& cfg,
                              std::vector<TrajectorySample>* trajectory = nullptr);

// Runs the matching integrable control (or a doubled-resolution pass when
// the subject is already integrable), sets the floor and classifies.
CollisionReport run_collision_with_control(
    const ExperimentConfig& cfg,
    std::vector<TrajectorySample>* trajectory = nullptr);

// Integrable nonlinearity sharing the subject's leading structure.
Nonlinearity integrable_control(const Nonlinearity& nl);

struct ScalingRow {
    double eps = 0.0, c = 0.0;
    double residual = 0.0, floor = -1.0;
    double c1_plus = 0.0, c2_plus = 0.0;
    Classification classification = Classification::Unclassified;
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    std::vector<std::pair<double, double>> slope_c_per_eps;  // (eps, slope)
    std::vector<std::pair<double, double>> slope_eps_per_c;  // (c, slope)
};

// Collisions of u^m + eps u^p over the grid of (eps, c); a control row at
// eps = 0 calibrates the floor at each c. Requires at least three points
// per axis.
ScalingStudy scaling_study(const ExperimentConfig& base,
                           const std::vector<double>& c_values,
                           const std::vector<double>& eps_values,
                           int threads = 1);

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& traj);
void write_scaling_csv(const std::string& path, const ScalingStudy& study);

}  // namespace gkdv
