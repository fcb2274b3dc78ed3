// Python bindings.  Results come back as plain dicts and lists so the
// module has no numpy dependency.

#include "schwarziso/charts.hpp"
#include "schwarziso/equilibria.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/manifold.hpp"
#include "schwarziso/model.hpp"
#include "schwarziso/orbits.hpp"
#include "schwarziso/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include <complex>

namespace py = pybind11;
using namespace schwarziso;

namespace {

py::list complex_list(const auto& zs) {
  py::list out;
  for (const std::complex<double>& z : zs) out.append(py::cast(z));
  return out;
}

py::dict reg_dict(const RegState& s) {
  py::dict d;
  d["r"] = s.r;
  d["v"] = s.v;
  d["theta"] = s.theta;
  d["w"] = s.w;
  return d;
}

py::dict derived_dict(const DerivedConstants& c) {
  py::dict d;
  d["mu"] = c.mu;
  d["alpha"] = c.alpha;
  d["beta"] = c.beta;
  d["C0"] = c.C0;
  d["V0"] = c.V0;
  d["W0"] = c.W0;
  d["gamma"] = c.gamma;
  d["theta_v"] = c.theta_v ? py::cast(*c.theta_v) : py::none();
  d["theta_w"] = c.theta_w ? py::cast(*c.theta_w) : py::none();
  d["regime_ok"] = c.regime.all();
  return d;
}

py::dict fate_dict(const FateReport& r) {
  py::dict d;
  d["fate"] = to_string(r.fate);
  d["limiting_theta"] = r.limiting_theta ? py::cast(*r.limiting_theta) : py::none();
  d["winding"] = r.winding;
  d["plane_crossings"] = r.plane_crossings;
  d["crossings_in_terminal_decade"] = r.crossings_in_terminal_decade;
  d["collision_r"] = r.collision_r ? py::cast(*r.collision_r) : py::none();
  d["final_state"] = reg_dict(r.final_state);
  d["max_r_increase"] = r.max_r_increase;
  d["max_v_increase"] = r.max_v_increase;
  d["steps"] = r.steps;
  d["status"] = to_string(r.status);
  d["note"] = r.note;
  return d;
}

ModelParams params_from(py::handle h) {
  if (h.is_none()) return {};
  if (py::isinstance<ModelParams>(h)) return h.cast<ModelParams>();
  auto d = h.cast<py::dict>();
  ModelParams p;
  for (auto [k, v] : d) {
    const auto key = k.cast<std::string>();
    const double x = v.cast<double>();
    if (key == "M") p.M = x;
    else if (key == "m") p.m = x;
    else if (key == "A") p.A = x;
    else if (key == "A1") p.A1 = x;
    else if (key == "B") p.B = x;
    else if (key == "B1") p.B1 = x;
    else throw InvalidInput("unknown parameter '" + key + "'");
  }
  validate(p);
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Isosceles three-body problem with Schwarzschild-type interaction";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double M, double mm, double A, double A1, double B, double B1) {
             ModelParams p{M, mm, A, A1, B, B1};
             validate(p);
             return p;
           }),
           py::arg("M") = 1.0, py::arg("m") = 0.01, py::arg("A") = 1.0, py::arg("A1") = 1.0, py::arg("B") = 0.2,
           py::arg("B1") = 0.2)
      .def_readwrite("M", &ModelParams::M)
      .def_readwrite("m", &ModelParams::m)
      .def_readwrite("A", &ModelParams::A)
      .def_readwrite("A1", &ModelParams::A1)
      .def_readwrite("B", &ModelParams::B)
      .def_readwrite("B1", &ModelParams::B1)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(M=" + std::to_string(p.M) + ", m=" + std::to_string(p.m) + ", A=" + std::to_string(p.A) +
               ", A1=" + std::to_string(p.A1) + ", B=" + std::to_string(p.B) + ", B1=" + std::to_string(p.B1) + ")";
      });

  m.def("derive", [](py::object p) { return derived_dict(derive(params_from(p))); }, py::arg("params") = py::none());

  m.def(
      "eval_angular",
      [](double theta, py::object p) {
        const auto a = eval_angular(params_from(p), theta);
        py::dict d;
        d["V"] = a.V;
        d["W"] = a.W;
        d["U"] = a.U;
        d["dV"] = a.dV;
        d["dW"] = a.dW;
        d["dU"] = a.dU;
        return d;
      },
      py::arg("theta"), py::arg("params") = py::none());

  m.def(
      "relative_equilibria",
      [](double C, py::object p) {
        py::list out;
        for (const auto& e : relative_equilibria(params_from(p), C)) {
          py::dict d;
          d["R"] = e.R;
          d["h"] = e.h;
          d["kind"] = to_string(e.kind);
          d["eigenvalues"] = complex_list(e.eigenvalues);
          d["closed_form_eigenvalues"] = complex_list(e.closed_form_eigenvalues);
          d["gradient_norm"] = e.gradient_norm;
          out.append(d);
        }
        return out;
      },
      py::arg("C"), py::arg("params") = py::none());

  m.def(
      "cm_equilibria",
      [](py::object p, double C) {
        py::list out;
        for (const auto& e : cm_equilibria(params_from(p), C)) {
          py::dict d;
          d["name"] = to_string(e.name);
          d["state"] = reg_dict(e.state);
          d["classification"] = to_string(e.classification);
          d["eigenvalues"] = complex_list(e.tangent_eigenvalues);
          d["closed_form"] = complex_list(e.closed_form);
          d["delta_eigenvalues"] = complex_list(e.delta_eigenvalues);
          d["dim_unstable"] = e.dim_unstable;
          d["dim_stable"] = e.dim_stable;
          out.append(d);
        }
        return out;
      },
      py::arg("params") = py::none(), py::arg("C") = 0.0);

  m.def(
      "connection_condition",
      [](py::object p) {
        const auto c = connection_condition(params_from(p));
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["cond_up_holds"] = c.cond_up_holds;
        d["param_lhs"] = c.param_lhs;
        d["param_rhs"] = c.param_rhs;
        d["cond_param_holds"] = c.cond_param_holds;
        d["agree"] = c.agree;
        return d;
      },
      py::arg("params") = py::none());

  m.def(
      "trace_manifold",
      [](const std::string& eq, const std::string& branch, py::object p) {
        const ModelParams mp = params_from(p);
        const auto e = cm_equilibrium(mp, 0.0, cm_name_from_string(eq));
        if (branch != "w_pos" && branch != "w_neg") throw InvalidInput("branch must be w_pos or w_neg");
        const auto tr = trace_manifold(mp, e, branch == "w_pos" ? Branch::w_pos : Branch::w_neg);
        py::dict d;
        d["outcome"] = to_string(tr.outcome);
        d["richardson_agrees"] = tr.richardson_agrees;
        d["tau_end"] = tr.tau_end;
        d["points"] = tr.trajectory.states.size();
        return d;
      },
      py::arg("eq"), py::arg("branch"), py::arg("params") = py::none());

  m.def(
      "planar_curve",
      [](double C, double h, double r_lo, double r_hi, std::size_t n, py::object p) {
        py::list r, v;
        for (const auto& s : planar_curve(params_from(p), C, h, r_lo, r_hi, n)) {
          r.append(s.r);
          v.append(s.v);
        }
        return py::make_tuple(r, v);
      },
      py::arg("C"), py::arg("h"), py::arg("r_lo"), py::arg("r_hi"), py::arg("n"), py::arg("params") = py::none());

  m.def(
      "planar_equilibria",
      [](double C, py::object p) {
        py::list out;
        for (const auto& e : planar_equilibria(params_from(p), C).equilibria) {
          py::dict d;
          d["r"] = e.r;
          d["type"] = to_string(e.type);
          d["h"] = e.h;
          out.append(d);
        }
        return out;
      },
      py::arg("C"), py::arg("params") = py::none());

  m.def(
      "sink_predicate",
      [](double C, double r, double v, double theta, double w, const std::string& bound, py::object p) {
        return sink_predicate(params_from(p), C, RegState{r, v, theta, w}, sink_bound_from_string(bound));
      },
      py::arg("C"), py::arg("r"), py::arg("v"), py::arg("theta") = 0.0, py::arg("w") = 0.0,
      py::arg("bound") = "printed", py::arg("params") = py::none());

  m.def(
      "classify_fate",
      [](double C, double h, double r, double v, double theta, double w, py::object p) {
        FateReport rep;
        const ModelParams mp = params_from(p);
        {
          py::gil_scoped_release nogil;
          rep = classify_fate(mp, C, h, RegState{r, v, theta, w});
        }
        return fate_dict(rep);
      },
      py::arg("C"), py::arg("h"), py::arg("r"), py::arg("v"), py::arg("theta") = 0.0, py::arg("w") = 0.0,
      py::arg("params") = py::none());

  m.def(
      "energy_of",
      [](double C, double r, double v, double theta, double w, py::object p) {
        return energy_of(params_from(p), C, RegState{r, v, theta, w});
      },
      py::arg("C"), py::arg("r"), py::arg("v"), py::arg("theta"), py::arg("w"), py::arg("params") = py::none());

  m.def(
      "integrate",
      [](const std::string& chart, std::vector<double> state, double t1, double C, double h, py::object p) {
        const VectorField f(chart_from_string(chart), params_from(p), C, h);
        State y0 = Eigen::Map<const Eigen::VectorXd>(state.data(), static_cast<Eigen::Index>(state.size()));
        f.check_initial(y0);
        Trajectory tr;
        {
          py::gil_scoped_release nogil;
          tr = integrate(f, y0, 0.0, t1);
        }
        py::list ts, ys;
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
          ts.append(tr.t[i]);
          ys.append(std::vector<double>(tr.states[i].data(), tr.states[i].data() + tr.states[i].size()));
        }
        return py::make_tuple(ts, ys, to_string(tr.status));
      },
      py::arg("chart"), py::arg("state"), py::arg("t1"), py::arg("C") = 0.0, py::arg("h") = 0.0,
      py::arg("params") = py::none());

  m.def(
      "run_criterion",
      [](int id, unsigned threads) {
        VerifyOptions o;
        o.threads = threads;
        CriterionResult r;
        {
          py::gil_scoped_release nogil;
          r = run_criterion(id, o);
        }
        py::dict d;
        d["id"] = r.id;
        d["title"] = r.title;
        d["passed"] = r.passed;
        d["details"] = r.details;
        return d;
      },
      py::arg("id"), py::arg("threads") = 0);
}
