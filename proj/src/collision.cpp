#include "gkdv/collision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <atomic>
#include <future>
#include <stdexcept>

#include <json.hpp>

#include "gkdv/errors.hpp"
#include "gkdv/approx.hpp"
#include "gkdv/soliton.hpp"

namespace gkdv {

namespace {

double amplitude_of(const Nonlinearity& nl, double c) {
    return make_soliton_evaluator(nl, c)->value(0.0);
}

// Invert the amplitude map c -> Qc(0).
double speed_from_amplitude(const Nonlinearity& nl, double amp) {
    if (nl.family() == Family::PurePower) {
        const int m = nl.m();
        const double q0 = std::pow(0.5 * (m + 1), 1.0 / (m - 1));
        return std::pow(amp / q0, m - 1.0);
    }
    double lo = 1e-6, hi = 1.0;
    while (amplitude_of(nl, hi) < amp) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) break;
    }
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        try {
            if (amplitude_of(nl, mid) < amp)
                lo = mid;
            else
                hi = mid;
        } catch (const NoSolitonError&) {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct PeakPair {
    double x1 = 0.0, a1 = 0.0;
    double x2 = 0.0, a2 = 0.0;
};

PeakPair find_peaks(const Profile& u, double exclusion) {
    PeakPair p;
    int i1 = 0;
    for (int i = 1; i + 1 < u.size(); ++i)
        if (u.values[i] > p.a1) {
            p.a1 = u.values[i];
            i1 = i;
        }
    p.x1 = u.x(i1);
    int i2 = -1;
    for (int i = 1; i + 1 < u.size(); ++i) {
        if (std::abs(u.x(i) - p.x1) < exclusion) continue;
        if (u.values[i] > p.a2) {
            p.a2 = u.values[i];
            i2 = i;
        }
    }
    if (i2 >= 0) p.x2 = u.x(i2);
    // Parabolic refinement of both peaks.
    auto refine = [&](int i, double* x, double* a) {
        if (i <= 0 || i + 1 >= u.size()) return;
        const double ym = u.values[i - 1], y0 = u.values[i],
                     yp = u.values[i + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den >= 0.0) return;
        const double s = 0.5 * (ym - yp) / den;
        *x = u.x(i) + s * u.grid.spacing;
        *a = y0 - 0.25 * (ym - yp) * s;
    };
    refine(i1, &p.x1, &p.a1);
    if (i2 >= 0) refine(i2, &p.x2, &p.a2);
    return p;
}

}  // namespace

FitResult fit_soliton(const Profile& u, const Nonlinearity& nl, double lo,
                      double hi) {
    const Grid& g = u.grid;
    int best = -1;
    double amp = 0.0;
    for (int i = 1; i + 1 < g.n_points; ++i) {
        const double x = g.x(i);
        if (x < lo || x > hi) continue;
        if (u.values[i] > amp) {
            amp = u.values[i];
            best = i;
        }
    }
    const double noise_floor = 1e-8 * std::max(1e-300, max_abs(u));
    if (best < 0 || amp < noise_floor)
        throw NotFoundError("fit_soliton: no bump above the noise floor");

    double x0 = g.x(best);
    {
        const double ym = u.values[best - 1], y0 = u.values[best],
                     yp = u.values[best + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den < 0.0) {
            const double s = 0.5 * (ym - yp) / den;
            x0 += s * g.spacing;
            amp = y0 - 0.25 * (ym - yp) * s;
        }
    }
    double c = speed_from_amplitude(nl, amp);

    // Joint least-squares refinement of (c, x0) inside the window.
    for (int iter = 0; iter < 8; ++iter) {
        const SolitonPtr q = make_soliton_evaluator(nl, c);
        const double dc = std::max(1e-7, 1e-6 * c);
        const SolitonPtr qp = make_soliton_evaluator(nl, c + dc);
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (int i = 0; i < g.n_points; ++i) {
            const double x = g.x(i);
            if (x < lo || x > hi) continue;
            const double arg = x - x0;
            const double r = u.values[i] - q->value(arg);
            const double jc = (qp->value(arg) - q->value(arg)) / dc;
            const double jx = -q->deriv(arg);  // d/dx0 of Qc(x - x0)
            a11 += jc * jc;
            a12 += jc * jx;
            a22 += jx * jx;
            b1 += jc * r;
            b2 += jx * r;
        }
        const double det = a11 * a22 - a12 * a12;
        if (det <= 0.0) break;
        const double step_c = (a22 * b1 - a12 * b2) / det;
        const double step_x = (a11 * b2 - a12 * b1) / det;
        c += step_c;
        x0 += step_x;
        if (c <= 0.0) {
            c = std::max(1e-8, c - step_c);
            break;
        }
        if (std::abs(step_c) < 1e-13 * std::max(1.0, c) &&
            std::abs(step_x) < 1e-13)
            break;
    }
    return {c, x0};
}

Nonlinearity integrable_control(const Nonlinearity& nl) {
    switch (nl.family()) {
        case Family::PurePower:
        case Family::Gardner:
            return nl;
        case Family::EpsilonFamily: {
            if (nl.m() == 3) return Nonlinearity::pure_power(3);
            const double cubic = nl.cubic_coef();
            return cubic == 0.0 ? Nonlinearity::pure_power(2)
                                : Nonlinearity::gardner(-cubic);
        }
        case Family::Custom:
        default:
            throw std::invalid_argument(
                "integrable_control: no control defined for custom "
                "nonlinearities");
    }
}

namespace {

struct RunLayout {
    double sep = 0.0;
    double t_col = 0.0;
    double t_final = 0.0;
    double center = 0.0;
    double x1 = 0.0, x2 = 0.0;  // grid-frame launch positions
    EvolverConfig evolver;
};

RunLayout make_layout(const ExperimentConfig& cfg) {
    RunLayout lay;
    const double c = cfg.c;
    lay.sep = cfg.initial_separation > 0.0 ? cfg.initial_separation
                                           : 20.0 / std::sqrt(c);
    lay.t_col = lay.sep / (1.0 - c);
    lay.t_final = (1.0 + cfg.settle_factor) * lay.t_col;
    const double p_lo = -40.0 / std::sqrt(c) - 30.0;
    const double p_hi = lay.t_final + lay.sep + 30.0 / std::sqrt(c) + 30.0;
    lay.center = 0.5 * (p_lo + p_hi);
    lay.evolver = cfg.evolver;
    const double needed = 0.5 * (p_hi - p_lo);
    if (lay.evolver.domain_half_length <= 0.0)
        lay.evolver.domain_half_length = needed;
    else if (lay.evolver.domain_half_length < needed)
        throw std::invalid_argument(
            "collision: domain too small for the interaction window plus "
            "settling time");
    if (lay.evolver.dt <= 0.0) lay.evolver.dt = 5e-3;
    lay.x1 = 0.0 - lay.center;
    lay.x2 = lay.sep - lay.center;
    return lay;
}

}  // namespace

CollisionReport run_collision(const ExperimentConfig& cfg,
                              std::vector<TrajectorySample>* trajectory) {
    if (!(cfg.c > 0.0 && cfg.c < 1.0))
        throw std::invalid_argument("collision: need 0 < c < 1");
    const double c = cfg.c;
    const RunLayout lay = make_layout(cfg);
    const Grid grid =
        periodic_grid(lay.evolver.domain_half_length, lay.evolver.n_modes);

    const Profile u0 = place_solitons(
        cfg.nl, {{1.0, lay.x1, 1.0}, {c, lay.x2, 1.0}}, grid);

    const double t_pre = 0.5 * lay.t_col;
    std::vector<double> cps;
    for (int i = 1; i <= cfg.checkpoints; ++i)
        cps.push_back(lay.t_final * i / cfg.checkpoints);
    cps.push_back(t_pre);
    const auto states = evolve(cfg.nl, u0, lay.t_final, lay.evolver, cps);

    auto state_at = [&](double t) -> const EvolutionState& {
        size_t best = 0;
        double dist = 1e300;
        for (size_t i = 0; i < states.size(); ++i) {
            const double d = std::abs(states[i].t - t);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return states[best];
    };

    const double wbig = 14.0;
    const double wsmall = 14.0 / std::sqrt(c);

    // Fit both bumps with windows clipped at the midpoint between them so
    // neither soliton leaks into the other's fit.
    auto fit_pair = [&](const EvolutionState& st) {
        const PeakPair pk = find_peaks(st.u, wbig);
        const double mid = 0.5 * (pk.x1 + pk.x2);
        auto clip = [&](double a, double b, double peak) {
            if (peak < mid) return std::pair<double, double>{a, std::min(b, mid)};
            return std::pair<double, double>{std::max(a, mid), b};
        };
        const auto [l1, r1] = clip(pk.x1 - wbig, pk.x1 + wbig, pk.x1);
        const auto [l2, r2] = clip(pk.x2 - wsmall, pk.x2 + wsmall, pk.x2);
        FitResult a = fit_soliton(st.u, cfg.nl, l1, r1);
        FitResult b = fit_soliton(st.u, cfg.nl, l2, r2);
        if (a.c_est < b.c_est) std::swap(a, b);
        return std::pair<FitResult, FitResult>{a, b};
    };

    // Incoming fits and free-flight reference.
    const EvolutionState& pre = state_at(t_pre);
    const auto [f1_pre, f2_pre] = fit_pair(pre);

    CollisionReport rep;
    rep.c1_pre = f1_pre.c_est;
    rep.c2_pre = f2_pre.c_est;
    rep.measure_time = states.back().t;

    // Outgoing fits.
    const EvolutionState& fin = states.back();
    const auto [f1, f2] = fit_pair(fin);
    rep.c1_plus = f1.c_est;
    rep.c2_plus = f2.c_est;
    rep.shift1 =
        f1.x_est - (f1_pre.x_est + f1_pre.c_est * (fin.t - pre.t));
    rep.shift2 =
        f2.x_est - (f2_pre.x_est + f2_pre.c_est * (fin.t - pre.t));

    // Post-collision residual w+ and its windows, at the last checkpoints.
    const SolitonPtr q1 = make_soliton_evaluator(cfg.nl, rep.c1_plus);
    const SolitonPtr q2 = make_soliton_evaluator(cfg.nl, rep.c2_plus);
    auto wplus_of = [&](const EvolutionState& st, double rho1, double rho2) {
        Profile w = st.u;
        for (int i = 0; i < grid.n_points; ++i) {
            const double x = grid.x(i);
            w.values[i] -= q1->value(x - rho1) + q2->value(x - rho2);
        }
        retag(w);
        return w;
    };
    const double margin = 10.0 / std::sqrt(c);
    {
        const Profile w = wplus_of(fin, f1.x_est, f2.x_est);
        const double left = -grid.half_length + 10.0;
        rep.residual_h1_weighted =
            h1_norm_window(w, left, f2.x_est - margin, c);
    }
    // Tail norm (right of the radiation) across the last three checkpoints.
    {
        std::vector<const EvolutionState*> last3;
        for (size_t i = states.size() >= 3 ? states.size() - 3 : 0;
             i < states.size(); ++i)
            last3.push_back(&states[i]);
        for (const EvolutionState* st : last3) {
            const auto [g1, g2] = fit_pair(*st);
            const SolitonPtr h1e = make_soliton_evaluator(cfg.nl, g1.c_est);
            const SolitonPtr h2e = make_soliton_evaluator(cfg.nl, g2.c_est);
            Profile w = st->u;
            for (int i = 0; i < grid.n_points; ++i) {
                const double x = grid.x(i);
                w.values[i] -=
                    h1e->value(x - g1.x_est) + h2e->value(x - g2.x_est);
            }
            rep.tail_norm_trend.push_back(h1_norm_window(
                w, g2.x_est - margin, grid.half_length - 5.0, c));
        }
    }

    rep.mass_drift = std::abs(states.back().mass - states.front().mass) /
                     std::max(1e-300, std::abs(states.front().mass));
    rep.energy_drift =
        std::abs(states.back().energy - states.front().energy) /
        std::max(1.0, std::abs(states.front().energy));
    for (const auto& st : states) rep.seam_warning |= st.seam_warning;

    // Predictions from the correction cascade.
    {
        CollisionPrediction pr;
        const int m = cfg.nl.m();
        pr.q = 2.0 / (m - 1) + 0.25;
        const double eps = cfg.nl.epsilon();
        pr.residual_lower = std::abs(eps) * std::pow(c, pr.q + 0.5);
        pr.residual_upper = std::abs(eps) * std::pow(c, pr.q);
        pr.c1_gain_lower = eps * eps * std::pow(c, 2.0 * pr.q + 1.0);
        pr.c1_gain_upper = eps * eps * std::pow(c, 2.0 * pr.q);
        pr.asymptotic_regime =
            eps != 0.0 &&
            c <= std::pow(std::abs(eps), m - 1.0 + 1.0 / 25.0);
        if (cfg.nl.family() != Family::Custom) {
            const CascadeSolution cas = solve_cascade(cfg.nl);
            pr.d = cas.d_epsilon;
            ApproxSolution ap(cas, c, ApproxVariant::Symmetric);
            const ShiftObservables sh = ap.shifts();
            pr.delta1 = sh.delta1;
            pr.delta2 = sh.delta2;
        }
        rep.predicted = pr;
    }

    if (trajectory) {
        trajectory->clear();
        for (const auto& st : states) {
            const PeakPair pk = find_peaks(st.u, wbig);
            trajectory->push_back({st.t, st.mass, st.energy, pk.x1, pk.a1,
                                   pk.x2, pk.a2});
        }
    }
    return rep;
}

CollisionReport run_collision_with_control(
    const ExperimentConfig& cfg, std::vector<TrajectorySample>* trajectory) {
    CollisionReport rep = run_collision(cfg, trajectory);
    const Nonlinearity control = integrable_control(cfg.nl);
    const bool already_integrable =
        control.to_json() == cfg.nl.to_json();
    if (already_integrable) {
        // Resolution doubling separates the discretization floor from
        // genuine radiation.
        ExperimentConfig doubled = cfg;
        doubled.evolver.n_modes *= 2;
        const CollisionReport fine = run_collision(doubled);
        rep.floor = fine.residual_h1_weighted;
        rep.classification =
            rep.residual_h1_weighted < 3.0 * std::max(rep.floor, 1e-14) ||
                    fine.residual_h1_weighted <
                        0.5 * rep.residual_h1_weighted
                ? Classification::ElasticWithinFloor
                : Classification::Inelastic;
    } else {
        ExperimentConfig ctrl = cfg;
        ctrl.nl = control;
        const CollisionReport base = run_collision(ctrl);
        rep.floor = base.residual_h1_weighted;
        rep.classification =
            rep.residual_h1_weighted >= 3.0 * std::max(rep.floor, 1e-14)
                ? Classification::Inelastic
                : Classification::ElasticWithinFloor;
    }
    return rep;
}

ScalingStudy scaling_study(const ExperimentConfig& base,
                           const std::vector<double>& c_values,
                           const std::vector<double>& eps_values,
                           int threads) {
    if (c_values.size() < 3 || eps_values.size() < 3)
        throw std::invalid_argument(
            "scaling_study: need at least three points per axis");
    struct Job {
        double eps, c;
    };
    std::vector<Job> jobs;
    for (double c : c_values) jobs.push_back({0.0, c});  // control row
    for (double eps : eps_values)
        for (double c : c_values) jobs.push_back({eps, c});

    auto run_one = [&](const Job& job) {
        ExperimentConfig cfg = base;
        cfg.c = job.c;
        if (job.eps == 0.0)
            cfg.nl = integrable_control(base.nl);
        else
            cfg.nl = Nonlinearity::epsilon_family(base.nl.m(), job.eps,
                                                  base.nl.p(),
                                                  base.nl.mu_hat());
        const CollisionReport rep = run_collision(cfg);
        ScalingRow row;
        row.eps = job.eps;
        row.c = job.c;
        row.residual = rep.residual_h1_weighted;
        row.c1_plus = rep.c1_plus;
        row.c2_plus = rep.c2_plus;
        return row;
    };

    std::vector<ScalingRow> rows(jobs.size());
    const int nthreads = std::max(1, threads);
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) return;
            rows[i] = run_one(jobs[i]);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::future<void>> fs;
        for (int i = 0; i < nthreads; ++i)
            fs.push_back(std::async(std::launch::async, worker));
        for (auto& f : fs) f.get();
    }

    ScalingStudy study;
    study.rows = rows;
    // Floor and classification from the matching control row.
    for (ScalingRow& row : study.rows) {
        if (row.eps == 0.0) continue;
        for (const ScalingRow& ctl : study.rows)
            if (ctl.eps == 0.0 && ctl.c == row.c) {
                row.floor = ctl.residual;
                row.classification =
                    row.residual >= 3.0 * std::max(row.floor, 1e-14)
                        ? Classification::Inelastic
                        : Classification::ElasticWithinFloor;
            }
    }
    auto lsq_slope = [](const std::vector<std::pair<double, double>>& pts) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = double(pts.size());
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    for (double eps : eps_values) {
        std::vector<std::pair<double, double>> pts;
        for (const ScalingRow& row : study.rows)
            if (row.eps == eps)
                pts.emplace_back(std::log(row.c), std::log(row.residual));
        study.slope_c_per_eps.emplace_back(eps, lsq_slope(pts));
    }
    for (double c : c_values) {
        std::vector<std::pair<double, double>> pts;
        for (const ScalingRow& row : study.rows)
            if (row.eps != 0.0 && row.c == c)
                pts.emplace_back(std::log(row.eps), std::log(row.residual));
        study.slope_eps_per_c.emplace_back(c, lsq_slope(pts));
    }
    return study;
}

// ------------------------------------------------------------------ io ---

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["nonlinearity"] = nlohmann::json::parse(nl.to_json());
    j["c"] = c;
    j["initial_separation"] = initial_separation;
    nlohmann::json ev;
    ev["domain_half_length"] = evolver.domain_half_length;
    ev["n_modes"] = evolver.n_modes;
    ev["dt"] = evolver.dt;
    ev["dealias"] = evolver.dealias;
    ev["integrator"] =
        evolver.integrator == Integrator::Etdrk4 ? "etdrk4" : "ifrk4";
    j["evolver"] = ev;
    j["window_slope"] = window_slope;
    j["settle_factor"] = settle_factor;
    j["checkpoints"] = checkpoints;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("schema", 1) != 1)
        throw std::invalid_argument("config: unsupported schema version");
    ExperimentConfig cfg;
    cfg.nl = Nonlinearity::from_json(j.at("nonlinearity").dump());
    cfg.c = j.at("c").get<double>();
    cfg.initial_separation = j.value("initial_separation", 0.0);
    if (j.contains("evolver")) {
        const auto& ev = j.at("evolver");
        cfg.evolver.domain_half_length = ev.value("domain_half_length", 0.0);
        cfg.evolver.n_modes = ev.value("n_modes", 4096);
        cfg.evolver.dt = ev.value("dt", 0.0);
        cfg.evolver.dealias = ev.value("dealias", true);
        const std::string integ = ev.value("integrator", "etdrk4");
        if (integ == "etdrk4")
            cfg.evolver.integrator = Integrator::Etdrk4;
        else if (integ == "ifrk4")
            cfg.evolver.integrator = Integrator::Ifrk4;
        else
            throw std::invalid_argument("config: unknown integrator " + integ);
    } else {
        cfg.evolver.n_modes = 4096;
        cfg.evolver.domain_half_length = 0.0;
        cfg.evolver.dt = 0.0;
    }
    cfg.window_slope = j.value("window_slope", 0.1);
    cfg.settle_factor = j.value("settle_factor", 2.5);
    cfg.checkpoints = j.value("checkpoints", 120);
    return cfg;
}

namespace {
const char* classification_name(Classification c) {
    switch (c) {
        case Classification::ElasticWithinFloor: return "elastic_within_floor";
        case Classification::Inelastic: return "inelastic";
        default: return "unclassified";
    }
}
}  // namespace

std::string CollisionReport::to_json() const {
    nlohmann::json j;
    j["c1_pre"] = c1_pre;
    j["c2_pre"] = c2_pre;
    j["c1_plus"] = c1_plus;
    j["c2_plus"] = c2_plus;
    j["shift1"] = shift1;
    j["shift2"] = shift2;
    j["residual_h1_weighted"] = residual_h1_weighted;
    j["tail_norm_trend"] = tail_norm_trend;
    j["floor"] = floor;
    j["classification"] = classification_name(classification);
    nlohmann::json pr;
    pr["q"] = predicted.q;
    pr["residual_lower"] = predicted.residual_lower;
    pr["residual_upper"] = predicted.residual_upper;
    pr["c1_gain_lower"] = predicted.c1_gain_lower;
    pr["c1_gain_upper"] = predicted.c1_gain_upper;
    pr["delta1"] = predicted.delta1;
    pr["delta2"] = predicted.delta2;
    pr["d"] = predicted.d;
    pr["asymptotic_regime"] = predicted.asymptotic_regime;
    j["predicted"] = pr;
    j["measure_time"] = measure_time;
    j["mass_drift"] = mass_drift;
    j["energy_drift"] = energy_drift;
    j["seam_warning"] = seam_warning;
    return j.dump(2);
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("trajectory: cannot open " + path);
    out << "t,mass,energy,peak1_x,peak1_amp,peak2_x,peak2_amp\n";
    char buf[256];
    for (const auto& s : traj) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                      s.mass, s.energy, s.peak1_x, s.peak1_amp, s.peak2_x,
                      s.peak2_amp);
        out << buf;
    }
}

void write_scaling_csv(const std::string& path, const ScalingStudy& study) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("scaling: cannot open " + path);
    out << "eps,c,residual,floor,c1_plus,c2_plus,classification\n";
    char buf[256];
    for (const auto& r : study.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      r.eps, r.c, r.residual, r.floor, r.c1_plus, r.c2_plus,
                      classification_name(r.classification));
        out << buf;
    }
}

}  // namespace gkdv
