#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gkdv/approx.hpp"
#include "gkdv/collision.hpp"
#include "gkdv/evolver.hpp"
#include "gkdv/linearized.hpp"
#include "gkdv/omega.hpp"
#include "gkdv/oracle.hpp"
#include "gkdv/soliton.hpp"

namespace py = pybind11;
using namespace gkdv;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Profile profile_from_array(const Grid& g, py::array_t<double> values) {
    if (values.size() != g.n_points)
        throw std::invalid_argument("values length does not match the grid");
    Profile p;
    p.grid = g;
    p.values.assign(values.data(), values.data() + values.size());
    retag(p);
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical laboratory for two-soliton collisions in "
              "generalized KdV equations";

    py::class_<Grid>(m, "Grid")
        .def_readonly("half_length", &Grid::half_length)
        .def_readonly("n_points", &Grid::n_points)
        .def_readonly("spacing", &Grid::spacing)
        .def("x", [](const Grid& g) {
            std::vector<double> xs(g.n_points);
            for (int i = 0; i < g.n_points; ++i) xs[i] = g.x(i);
            return to_array(xs);
        });
    m.def("make_grid", &make_grid, py::arg("half_length"),
          py::arg("n_points"));
    m.def("default_grid", &default_grid, py::arg("c") = 1.0,
          py::arg("n_points") = 4096);
    m.def("periodic_grid", &periodic_grid, py::arg("half_length"),
          py::arg("n_modes"));

    py::class_<Profile>(m, "Profile")
        .def_property_readonly("grid",
                               [](const Profile& p) { return p.grid; })
        .def_property_readonly(
            "values", [](const Profile& p) { return to_array(p.values); })
        .def("__len__", [](const Profile& p) { return p.values.size(); });
    m.def("profile", &profile_from_array, py::arg("grid"), py::arg("values"));
    m.def("integrate", &integrate);
    m.def("differentiate", &differentiate, py::arg("p"), py::arg("order"),
          py::arg("accuracy") = 4);
    m.def("cumulative_primitive", &cumulative_primitive);
    m.def("h1_norm",
          [](const Profile& p, std::optional<double> window, double cw) {
              return h1_norm(p, window, cw);
          },
          py::arg("p"), py::arg("window") = std::nullopt,
          py::arg("c_weight") = 1.0);
    m.def("write_csv", &write_csv);
    m.def("read_csv", &read_csv);

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("pure_power", &Nonlinearity::pure_power, py::arg("m"))
        .def_static("gardner", &Nonlinearity::gardner, py::arg("mu"))
        .def_static("epsilon_family", &Nonlinearity::epsilon_family,
                    py::arg("m"), py::arg("epsilon"), py::arg("p"),
                    py::arg("mu_hat") = 0.0)
        .def_static("from_json", &Nonlinearity::from_json)
        .def("f", &Nonlinearity::f, py::arg("s"), py::arg("order") = 0)
        .def("F", &Nonlinearity::F, py::arg("s"))
        .def_property_readonly("m", &Nonlinearity::m)
        .def_property_readonly("epsilon", &Nonlinearity::epsilon)
        .def_property_readonly("p", &Nonlinearity::p)
        .def("to_json", &Nonlinearity::to_json);

    py::class_<SolitonProfile>(m, "SolitonProfile")
        .def_readonly("profile", &SolitonProfile::profile)
        .def_readonly("c", &SolitonProfile::c)
        .def_readonly("amplitude", &SolitonProfile::amplitude)
        .def("value", [](const SolitonProfile& sp, double x) {
            return sp.evaluator->value(x);
        });
    m.def("soliton_profile", &soliton_profile, py::arg("nl"), py::arg("c"),
          py::arg("grid"));
    m.def("lambda_q", &lambda_q, py::arg("nl"), py::arg("grid"));
    m.def("stability_derivative", &stability_derivative, py::arg("nl"),
          py::arg("c"));
    m.def("soliton_power_integral", &soliton_power_integral, py::arg("nl"),
          py::arg("c"), py::arg("k"));

    py::class_<EigenPair>(m, "EigenPair")
        .def_readonly("lambda0", &EigenPair::lambda0)
        .def_readonly("chi0", &EigenPair::chi0);
    py::class_<SpecialSolutions>(m, "SpecialSolutions")
        .def_readonly("P", &SpecialSolutions::P)
        .def_readonly("P_hat", &SpecialSolutions::P_hat)
        .def_readonly("P_bar", &SpecialSolutions::P_bar);
    py::class_<LinearizedOperator>(m, "LinearizedOperator")
        .def(py::init<const Nonlinearity&, const Grid&>())
        .def("apply", &LinearizedOperator::apply)
        .def("invert",
             [](const LinearizedOperator& op, const Profile& h,
                const std::string& parity) {
                 return op.invert(h, parity == "odd" ? Parity::Odd
                                                     : Parity::Even);
             },
             py::arg("h"), py::arg("parity") = "even")
        .def("ground_state", &LinearizedOperator::ground_state)
        .def("special_solutions", &LinearizedOperator::special_solutions)
        .def("lambda_q", &LinearizedOperator::lambda_q_profile,
             py::return_value_policy::copy)
        .def("phi", &LinearizedOperator::phi, py::return_value_policy::copy)
        .def_property_readonly("potential",
                               &LinearizedOperator::potential);
    m.def("resonance_phi", &resonance_phi);

    py::class_<OmegaSolution>(m, "OmegaSolution")
        .def_readonly("A", &OmegaSolution::A)
        .def_readonly("B", &OmegaSolution::B)
        .def_readonly("a", &OmegaSolution::a)
        .def_readonly("b", &OmegaSolution::b)
        .def_readonly("gamma", &OmegaSolution::gamma)
        .def_readonly("kappa", &OmegaSolution::kappa);
    py::class_<CascadeSolution>(m, "CascadeSolution")
        .def("at", &CascadeSolution::at, py::arg("k"), py::arg("l"),
             py::return_value_policy::reference_internal)
        .def_readonly("defect", &CascadeSolution::d_epsilon)
        .def_readonly("b_tilde_11", &CascadeSolution::b_tilde_11)
        .def("to_json", &CascadeSolution::to_json);
    m.def("solve_cascade",
          [](const Nonlinearity& nl) { return solve_cascade(nl); });
    m.def("defect", &defect);
    m.def("b20_closed_integrals", &b20_closed_integrals);

    m.def("leading_coefficient", &leading_coefficient, py::arg("m"),
          py::arg("p"));
    m.def("sech_power_integral", &sech_power_integral, py::arg("m"),
          py::arg("p"));
    m.def("a10_first_order", &a10_first_order, py::arg("m"), py::arg("p"));
    m.def("gardner_defect_chain", &gardner_defect_chain, py::arg("mu_tilde"));

    py::class_<ShiftObservables>(m, "ShiftObservables")
        .def_readonly("delta1", &ShiftObservables::delta1)
        .def_readonly("delta2", &ShiftObservables::delta2);
    py::class_<ApproxSolution>(m, "ApproxSolution")
        .def(py::init([](const CascadeSolution& cas, double c,
                         const std::string& variant) {
                 return ApproxSolution(cas, c,
                                       variant == "hat"
                                           ? ApproxVariant::Modified
                                           : ApproxVariant::Symmetric);
             }),
             py::arg("cascade"), py::arg("c"), py::arg("variant") = "sym")
        .def("interaction_time", &ApproxSolution::interaction_time)
        .def("eval", &ApproxSolution::eval, py::arg("t"), py::arg("grid"))
        .def("shifts", &ApproxSolution::shifts)
        .def("beta_alpha", &ApproxSolution::beta_alpha, py::arg("s"));
    m.def("approx_eval_grid", &approx_eval_grid, py::arg("c"),
          py::arg("target_spacing") = 0.025);
    m.def("residual_h1_max", &residual_h1_max, py::arg("approx"),
          py::arg("grid"), py::arg("n_times") = 41);

    py::class_<EvolverConfig>(m, "EvolverConfig")
        .def(py::init<>())
        .def_readwrite("domain_half_length",
                       &EvolverConfig::domain_half_length)
        .def_readwrite("n_modes", &EvolverConfig::n_modes)
        .def_readwrite("dt", &EvolverConfig::dt)
        .def_readwrite("dealias", &EvolverConfig::dealias);
    py::class_<EvolutionState>(m, "EvolutionState")
        .def_readonly("t", &EvolutionState::t)
        .def_readonly("u", &EvolutionState::u)
        .def_readonly("mass", &EvolutionState::mass)
        .def_readonly("energy", &EvolutionState::energy)
        .def_readonly("seam_warning", &EvolutionState::seam_warning);
    m.def("place_solitons",
          [](const Nonlinearity& nl,
             const std::vector<std::tuple<double, double, double>>& pls,
             const Grid& g) {
              std::vector<SolitonPlacement> v;
              for (const auto& [c, x0, sign] : pls) v.push_back({c, x0, sign});
              return place_solitons(nl, v, g);
          });
    m.def("evolve",
          [](const Nonlinearity& nl, const Profile& u0, double t_final,
             const EvolverConfig& cfg, int n_checkpoints) {
              return evolve(nl, u0, t_final, cfg, n_checkpoints);
          },
          py::arg("nl"), py::arg("u0"), py::arg("t_final"), py::arg("config"),
          py::arg("n_checkpoints") = 10);
    m.def("conserved", &conserved, py::arg("nl"), py::arg("u"));

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("c_est", &FitResult::c_est)
        .def_readonly("x_est", &FitResult::x_est);
    m.def("fit_soliton", &fit_soliton, py::arg("u"), py::arg("nl"),
          py::arg("lo"), py::arg("hi"));
    m.def("run_collision",
          [](const std::string& config_json) {
              const ExperimentConfig cfg =
                  ExperimentConfig::from_json(config_json);
              return run_collision(cfg).to_json();
          },
          py::arg("config_json"));
    m.def("run_collision_with_control",
          [](const std::string& config_json) {
              const ExperimentConfig cfg =
                  ExperimentConfig::from_json(config_json);
              return run_collision_with_control(cfg).to_json();
          },
          py::arg("config_json"));
}
