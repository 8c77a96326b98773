// Command-line front end: soliton construction, cascade coefficients,
// collision ansatz dumps, time evolution, collision experiments, and the
// oracle verification table.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gkdv/approx.hpp"
#include "gkdv/collision.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/evolver.hpp"
#include "gkdv/linearized.hpp"
#include "gkdv/omega.hpp"
#include "gkdv/oracle.hpp"
#include "gkdv/soliton.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::invalid_argument("cannot open " + arg.substr(1));
        return std::string(std::istreambuf_iterator<char>(in), {});
    }
    return arg;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text << "\n";
}

int run_soliton(const std::string& nl_arg, double c, double half_length,
                int points, const std::string& outdir) {
    const gkdv::Nonlinearity nl = gkdv::Nonlinearity::from_json(slurp(nl_arg));
    const gkdv::Grid grid =
        half_length > 0 ? gkdv::make_grid(half_length, points)
                        : gkdv::default_grid(c, points);
    const gkdv::SolitonProfile sp = gkdv::soliton_profile(nl, c, grid);
    ensure_dir(outdir);
    gkdv::write_csv(outdir + "/profile.csv", sp.profile);
    json j;
    j["c"] = c;
    j["amplitude"] = sp.amplitude;
    j["mass"] = gkdv::soliton_power_integral(nl, c, 2.0);
    j["stability_derivative"] = gkdv::stability_derivative(nl, c);
    write_text(outdir + "/soliton.json", j.dump(2));
    std::cout << outdir << "/profile.csv written, amplitude " << sp.amplitude
              << "\n";
    return 0;
}

int run_coeffs(const std::string& nl_arg, const std::string& outdir) {
    const gkdv::Nonlinearity nl = gkdv::Nonlinearity::from_json(slurp(nl_arg));
    const gkdv::CascadeSolution cas = gkdv::solve_cascade(nl);
    ensure_dir(outdir);
    write_text(outdir + "/cascade.json", cas.to_json());
    std::cout << "d = " << cas.d_epsilon << ", a_1_0 = " << cas.at(1, 0).a
              << ", b_1_0 = " << cas.at(1, 0).b << "\n";
    return 0;
}

int run_approx(const std::string& nl_arg, double c,
               const std::string& variant, const std::string& outdir,
               int n_times) {
    const gkdv::Nonlinearity nl = gkdv::Nonlinearity::from_json(slurp(nl_arg));
    const gkdv::ApproxVariant var =
        variant == "hat" ? gkdv::ApproxVariant::Modified
                         : gkdv::ApproxVariant::Symmetric;
    const gkdv::CascadeSolution cas = gkdv::solve_cascade(nl);
    const gkdv::ApproxSolution ap(cas, c, var);
    const gkdv::Grid grid = gkdv::approx_eval_grid(c);
    ensure_dir(outdir);
    const double tc = ap.interaction_time();
    double residual_max = 0.0;
    auto u_of_t = [&](double t) { return ap.eval(t, grid); };
    for (int i = 0; i < n_times; ++i) {
        const double t = -tc + 2.0 * tc * i / (n_times - 1);
        const gkdv::Profile u = ap.eval(t, grid);
        char name[64];
        std::snprintf(name, sizeof(name), "/u_%03d.csv", i);
        gkdv::write_csv(outdir + name, u);
        const gkdv::Profile s = gkdv::residual_S(nl, u_of_t, t, 1e-5 * tc);
        residual_max = std::max(residual_max, gkdv::h1_norm(s, {}, 1.0));
    }
    const gkdv::ShiftObservables sh = ap.shifts();
    json j;
    j["T_c"] = tc;
    j["delta1"] = sh.delta1;
    j["delta2"] = sh.delta2;
    j["residual_h1_max"] = residual_max;
    write_text(outdir + "/summary.json", j.dump(2));
    std::cout << "T_c = " << tc << ", residual_h1_max = " << residual_max
              << "\n";
    return 0;
}

int run_evolve(const std::string& config_arg, const std::string& outdir,
               int dump_every) {
    const json j = json::parse(slurp(config_arg));
    if (j.value("schema", 1) != 1)
        throw std::invalid_argument("config: unsupported schema version");
    const gkdv::Nonlinearity nl =
        gkdv::Nonlinearity::from_json(j.at("nonlinearity").dump());
    gkdv::EvolverConfig cfg;
    if (j.contains("evolver")) {
        const auto& ev = j.at("evolver");
        cfg.domain_half_length = ev.value("domain_half_length", 50.0);
        cfg.n_modes = ev.value("n_modes", 1024);
        cfg.dt = ev.value("dt", 2e-3);
        cfg.dealias = ev.value("dealias", true);
        cfg.integrator = ev.value("integrator", "etdrk4") == std::string("ifrk4")
                             ? gkdv::Integrator::Ifrk4
                             : gkdv::Integrator::Etdrk4;
    }
    std::vector<gkdv::SolitonPlacement> placements;
    for (const auto& p : j.at("placements"))
        placements.push_back({p.at("c").get<double>(),
                              p.at("x0").get<double>(),
                              p.value("sign", 1.0)});
    const double t_final = j.at("t_final").get<double>();
    const int n_checkpoints = j.value("checkpoints", 50);

    const gkdv::Grid grid = gkdv::periodic_grid(cfg.domain_half_length,
                                                cfg.n_modes);
    const gkdv::Profile u0 = gkdv::place_solitons(nl, placements, grid);
    const auto states = gkdv::evolve(nl, u0, t_final, cfg, n_checkpoints);

    ensure_dir(outdir);
    std::ofstream csv(outdir + "/checkpoints.csv");
    csv << "t,mass,energy,peak1_x,peak1_amp,peak2_x,peak2_amp\n";
    int idx = 0;
    for (const auto& st : states) {
        int imax = 0;
        for (int i = 1; i + 1 < st.u.size(); ++i)
            if (st.u.values[i] > st.u.values[imax]) imax = i;
        int imax2 = -1;
        for (int i = 1; i + 1 < st.u.size(); ++i) {
            if (std::abs(st.u.x(i) - st.u.x(imax)) < 14.0) continue;
            if (imax2 < 0 || st.u.values[i] > st.u.values[imax2]) imax2 = i;
        }
        char line[256];
        std::snprintf(line, sizeof(line),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", st.t,
                      st.mass, st.energy, st.u.x(imax), st.u.values[imax],
                      imax2 >= 0 ? st.u.x(imax2) : 0.0,
                      imax2 >= 0 ? st.u.values[imax2] : 0.0);
        csv << line;
        if (dump_every > 0 && idx % dump_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/field_%04d.csv", idx);
            gkdv::write_csv(outdir + name, st.u);
        }
        ++idx;
    }
    std::cout << states.size() << " checkpoints written to " << outdir
              << "/checkpoints.csv\n";
    return 0;
}

int run_collide(const std::string& config_arg, const std::string& outdir,
                int threads, int checkpoint_every) {
    const std::string text = slurp(config_arg);
    const json j = json::parse(text);
    gkdv::ExperimentConfig cfg = gkdv::ExperimentConfig::from_json(text);
    if (checkpoint_every > 0) cfg.checkpoints = checkpoint_every;
    ensure_dir(outdir);
    if (j.contains("study")) {
        const auto& st = j.at("study");
        const std::vector<double> cs =
            st.at("c_values").get<std::vector<double>>();
        const std::vector<double> eps =
            st.at("eps_values").get<std::vector<double>>();
        const gkdv::ScalingStudy study =
            gkdv::scaling_study(cfg, cs, eps, threads);
        gkdv::write_scaling_csv(outdir + "/residual_scan.csv", study);
        json out;
        for (const auto& [e, s] : study.slope_c_per_eps)
            out["slope_c"][std::to_string(e)] = s;
        for (const auto& [c, s] : study.slope_eps_per_c)
            out["slope_eps"][std::to_string(c)] = s;
        write_text(outdir + "/report.json", out.dump(2));
        std::cout << "residual_scan.csv written (" << study.rows.size()
                  << " rows)\n";
        return 0;
    }
    std::vector<gkdv::TrajectorySample> traj;
    const gkdv::CollisionReport rep =
        gkdv::run_collision_with_control(cfg, &traj);
    write_text(outdir + "/report.json", rep.to_json());
    gkdv::write_trajectory_csv(outdir + "/trajectory.csv", traj);
    std::cout << "classification: "
              << (rep.classification == gkdv::Classification::Inelastic
                      ? "inelastic"
                      : "elastic_within_floor")
              << ", residual " << rep.residual_h1_weighted << "\n";
    return 0;
}

int run_verify_oracle(const std::string& outdir) {
    const std::vector<std::pair<int, double>> cases = {
        {2, 4.0}, {2, 5.0}, {3, 4.0}, {3, 5.0}};
    const auto rows = gkdv::oracle_comparison_table(cases);
    ensure_dir(outdir);
    gkdv::write_oracle_csv(outdir + "/oracle.csv", rows);
    for (const auto& r : rows)
        std::printf("m=%d p=%.2g  c_mp=%.8g  slope=%.8g  rel=%.2e\n", r.m,
                    r.p, r.c_mp, r.pipeline_slope, r.rel_error);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-soliton collision laboratory for generalized KdV"};
    app.require_subcommand(1);

    std::string nl_arg = "{\"family\":\"pure_power\",\"m\":2}";
    std::string config_arg;
    std::string outdir = ".";
    std::string variant = "sym";
    double c = 0.5;
    double half_length = 0.0;
    int points = 4096;
    int n_times = 41;
    int threads = 1;
    int checkpoint_every = 0;
    int dump_every = 0;

    auto* sol = app.add_subcommand("soliton", "construct a traveling wave");
    sol->add_option("--nl", nl_arg, "nonlinearity JSON or @file");
    sol->add_option("--c", c, "speed");
    sol->add_option("--half-length", half_length, "grid half length");
    sol->add_option("--points", points, "grid points");
    sol->add_option("--out", outdir, "output directory");

    auto* coe = app.add_subcommand("coeffs", "solve the correction cascade");
    coe->add_option("--nl", nl_arg, "nonlinearity JSON or @file");
    coe->add_option("--out", outdir, "output directory");

    auto* apx = app.add_subcommand("approx", "evaluate the collision ansatz");
    apx->add_option("--nl", nl_arg, "nonlinearity JSON or @file");
    apx->add_option("--c", c, "speed ratio");
    apx->add_option("--variant", variant, "sym or hat");
    apx->add_option("--times", n_times, "time samples");
    apx->add_option("--out", outdir, "output directory");

    auto* evo = app.add_subcommand("evolve", "pseudospectral time evolution");
    evo->add_option("--config", config_arg, "config JSON or @file")->required();
    evo->add_option("--out", outdir, "output directory");
    evo->add_option("--dump-every", dump_every, "dump fields every k");

    auto* col = app.add_subcommand("collide", "two-soliton experiment");
    col->add_option("--config", config_arg, "config JSON or @file")->required();
    col->add_option("--out", outdir, "output directory");
    col->add_option("--threads", threads, "worker threads for studies");
    col->add_option("--checkpoint-every", checkpoint_every,
                    "trajectory checkpoints");

    auto* ver = app.add_subcommand("verify", "cross-check suites");
    auto* ver_oracle =
        ver->add_subcommand("oracle", "defect slopes versus closed forms");
    ver_oracle->add_option("--out", outdir, "output directory");
    ver->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sol) return run_soliton(nl_arg, c, half_length, points, outdir);
        if (*coe) return run_coeffs(nl_arg, outdir);
        if (*apx) return run_approx(nl_arg, c, variant, outdir, n_times);
        if (*evo) return run_evolve(config_arg, outdir, dump_every);
        if (*col) return run_collide(config_arg, outdir, threads,
                                     checkpoint_every);
        if (*ver_oracle) return run_verify_oracle(outdir);
    } catch (const gkdv::DivergenceError& e) {
        std::cerr << "numerical divergence: " << e.what() << " (last good t = "
                  << e.last_good_time << ")\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
