// schwarziso: command-line front end.
// exit codes: 0 ok, 1 verification failure, 2 bad input

#include "schwarziso/charts.hpp"
#include "schwarziso/equilibria.hpp"
#include "schwarziso/flow.hpp"
#include "schwarziso/io.hpp"
#include "schwarziso/manifold.hpp"
#include "schwarziso/model.hpp"
#include "schwarziso/orbits.hpp"
#include "schwarziso/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace schwarziso;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

State parse_state(const std::vector<double>& v) {
  State y(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) y(static_cast<Eigen::Index>(i)) = v[i];
  return y;
}

void save(const fs::path& p, const std::string& text) {
  write_text(p, text);
  std::cerr << "wrote " << p.string() << '\n';
}

std::string csv_of(const Trajectory& tr) {
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schwarzschild isosceles three-body problem: equilibria, collision manifold, orbit fates"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  app.add_option("-c,--config", config_path, "JSON run configuration");
  app.add_option("-o,--out", out_dir, "output directory (overrides the config)");

  RunConfig cfg;
  auto load = [&] {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
  };

  // equilibria
  auto* eq = app.add_subcommand("equilibria", "relative equilibria and their stability at angular momentum C");
  double eq_C = 3.0;
  eq->add_option("--C", eq_C, "angular momentum")->required();

  // em-diagram
  auto* em = app.add_subcommand("em-diagram", "energy-momentum curve of the relative equilibria (CSV)");
  double em_lo = 0.05, em_hi = 50.0;
  std::size_t em_n = 2000;
  em->add_option("--r-lo", em_lo);
  em->add_option("--r-hi", em_hi);
  em->add_option("--n", em_n);

  // manifold
  auto* mf = app.add_subcommand("manifold", "equilibria on the collision manifold and the connection condition");
  double mf_C = 0.0;
  mf->add_option("--C", mf_C, "angular momentum (enters only the tangent space)");

  // trace
  auto* tr = app.add_subcommand("trace", "shoot an unstable manifold on the collision manifold");
  std::string tr_eq = "Eminus", tr_branch = "w_pos";
  double tr_eps = 1e-7, tr_tau = 1e3;
  std::optional<double> tr_ray;
  tr->add_option("--eq", tr_eq, "saddle: Eplus, Eminus, EplusStar, EminusStar");
  tr->add_option("--branch", tr_branch, "w_pos or w_neg");
  tr->add_option("--ray", tr_ray, "trace a ray of W_u(Q) at this angle instead");
  tr->add_option("--eps", tr_eps);
  tr->add_option("--tau-max", tr_tau);

  // planar
  auto* pl = app.add_subcommand("planar", "planar phase curves for a list of energies (CSV, optional SVG)");
  std::optional<double> pl_C;
  std::vector<double> pl_h{1.0, 0.0, -1.0, -5.0};
  double pl_lo = 0.0, pl_hi = 4.0;
  std::size_t pl_n = 801;
  bool pl_svg = false;
  pl->add_option("--C", pl_C, "angular momentum (default C0 - 0.5)");
  pl->add_option("--energies", pl_h, "energy levels")->delimiter(',');
  pl->add_option("--r-lo", pl_lo);
  pl->add_option("--r-hi", pl_hi);
  pl->add_option("--n", pl_n);
  pl->add_flag("--svg", pl_svg, "also write planar.svg");

  // simulate
  auto* sm = app.add_subcommand("simulate", "integrate one initial condition in a chosen chart");
  std::string sm_chart = "regularized";
  std::vector<double> sm_state;
  double sm_C = 0.0, sm_h = 0.0, sm_t1 = 10.0;
  bool sm_project = false, sm_phase = false;
  std::vector<std::string> sm_events;
  std::vector<double> sm_levels;
  sm->add_option("--chart", sm_chart, "reduced, mcgehee, regularized, collision, planar, profile");
  sm->add_option("--state", sm_state, "initial state, comma separated")->delimiter(',')->required();
  sm->add_option("--C", sm_C);
  sm->add_option("--energy", sm_h, "energy h");
  sm->add_option("--t1", sm_t1, "end of the span");
  sm->add_flag("--project", sm_project, "project onto the energy relation after each step");
  sm->add_flag("--phase", sm_phase, "integrate the ignorable angle as well");
  sm->add_option("--event", sm_events, "r_below, r_above, theta_near_pm_half, v_below, plane_crossing")->delimiter(',');
  sm->add_option("--level", sm_levels, "one threshold per event (ignored for plane_crossing)")->delimiter(',');

  // classify
  auto* cl = app.add_subcommand("classify", "fate of a batch of orbits (JSON array in, CSV out)");
  std::string cl_in;
  unsigned cl_threads = 0;
  cl->add_option("--input", cl_in, "JSON array of {C, h, state0: {r, v, theta, w}}")->required();
  cl->add_option("--threads", cl_threads);

  // verify
  auto* vf = app.add_subcommand("verify", "run the invariant suite; nonzero exit on any failure");
  std::vector<int> vf_ids;
  unsigned vf_threads = 0;
  vf->add_option("--criterion", vf_ids, "restrict to these criteria (1..12)")->delimiter(',');
  vf->add_option("--threads", vf_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    load();
    const ModelParams& p = cfg.params;
    const fs::path out = cfg.output_dir;

    if (*eq) {
      std::cout << equilibria_json(relative_equilibria(p, eq_C, cfg.convention), cfg.convention) << '\n';
      return 0;
    }
    if (*em) {
      std::ostringstream os;
      write_em_csv(os, em_diagram(p, em_lo, em_hi, em_n, cfg.convention));
      save(out / "em_diagram.csv", os.str());
      return 0;
    }
    if (*mf) {
      const std::string js = manifold_json(p, cm_equilibria(p, mf_C), connection_condition(p));
      save(out / "manifold.json", js);
      std::cout << js << '\n';
      return 0;
    }
    if (*tr) {
      TraceOptions to;
      to.eps = tr_eps;
      to.tau_max = tr_tau;
      to.integrator = integrator_options(cfg);
      ManifoldTrace mt;
      std::string stem;
      if (tr_ray) {
        mt = trace_ray(p, *tr_ray, to);
        stem = "trace_Q_ray";
      } else {
        if (tr_branch != "w_pos" && tr_branch != "w_neg") throw InvalidInput("--branch must be w_pos or w_neg");
        const CMEquilibrium e = cm_equilibrium(p, 0.0, cm_name_from_string(tr_eq));
        mt = trace_manifold(p, e, tr_branch == "w_pos" ? Branch::w_pos : Branch::w_neg, to);
        stem = "trace_" + tr_eq + "_" + tr_branch;
      }
      save(out / (stem + ".csv"), csv_of(mt.trajectory));
      save(out / (stem + ".events.json"), events_json(mt.trajectory));
      std::cout << "{\"outcome\": \"" << to_string(mt.outcome) << "\", \"connected_to\": "
                << (mt.connected_to ? "\"" + to_string(*mt.connected_to) + "\"" : std::string("null"))
                << ", \"tau_end\": " << fmt17(mt.tau_end) << ", \"richardson_outcome\": \""
                << to_string(mt.richardson_outcome) << "\", \"richardson_agrees\": "
                << (mt.richardson_agrees ? "true" : "false")
                << ", \"max_constraint_residual\": " << fmt17(mt.max_constraint_residual) << "}\n";
      return 0;
    }
    if (*pl) {
      const DerivedConstants d = derive(p);
      const double C = pl_C.value_or(d.C0 - 0.5);
      std::vector<SvgSeries> series;
      std::ostringstream all;
      bool first = true;
      for (double h : pl_h) {
        const auto s = planar_curve(p, C, h, pl_lo, pl_hi, pl_n);
        std::ostringstream os;
        write_planar_csv(os, C, h, s);
        const std::string body = os.str();
        all << (first ? body : body.substr(body.find('\n') + 1));
        first = false;
        // upper and lower branch in one polyline set, split by a NaN
        SvgSeries curve{"h=" + fmt17(h), {}, {}};
        for (const auto& q : s) curve.x.push_back(q.r), curve.y.push_back(q.v);
        curve.x.push_back(std::nan(""));
        curve.y.push_back(std::nan(""));
        for (const auto& q : s) curve.x.push_back(q.r), curve.y.push_back(-q.v);
        series.push_back(curve);
      }
      save(out / "planar.csv", all.str());
      if (pl_svg) save(out / "planar.svg", render_svg("planar phase curves, C=" + fmt17(C), "r", "v", series));
      const auto reg = planar_equilibria(p, C);
      for (const auto& e : reg.equilibria)
        std::cout << "equilibrium r=" << fmt17(e.r) << " type=" << to_string(e.type) << " h=" << fmt17(e.h) << '\n';
      if (reg.equilibria.empty()) std::cout << "no planar equilibria (C < C0)\n";
      return 0;
    }
    if (*sm) {
      const Chart chart = chart_from_string(sm_chart);
      const VectorField f(chart, p, sm_C, sm_h, sm_phase);
      State y0 = parse_state(sm_state);
      if (sm_phase && y0.size() == chart_dim(chart)) {
        y0.conservativeResize(y0.size() + 1);
        y0(y0.size() - 1) = 0.0;
      }
      if (y0.size() != f.dim()) throw InvalidInput("state has the wrong dimension for chart " + sm_chart);
      std::vector<EventSpec> evs;
      for (std::size_t i = 0; i < sm_events.size(); ++i) {
        const std::string& k = sm_events[i];
        const double lvl = i < sm_levels.size() ? sm_levels[i] : 0.0;
        if (k == "r_below") evs.push_back(event_r_below(lvl));
        else if (k == "r_above") evs.push_back(event_r_above(lvl));
        else if (k == "theta_near_pm_half") evs.push_back(event_theta_near_half_pi(lvl));
        else if (k == "v_below") evs.push_back(event_v_below(lvl));
        else if (k == "plane_crossing") evs.push_back(event_plane_crossing());
        else throw InvalidInput("unknown event kind '" + k + "'");
      }
      const double t0 = 0.0;
      f.check_initial(y0, t0, 1e-6);
      IntegratorOptions io = integrator_options(cfg);
      io.project = sm_project;
      const Trajectory t = integrate(f, y0, t0, sm_t1, io, evs);
      save(out / "simulate.csv", csv_of(t));
      save(out / "simulate.events.json", events_json(t));
      std::cout << "status=" << to_string(t.status) << " steps=" << t.stats.accepted
                << " rejected=" << t.stats.rejected << " t_end=" << fmt17(t.t_end())
                << " max_residual=" << fmt17(t.stats.max_abs_residual) << '\n';
      return 0;
    }
    if (*cl) {
      const auto jobs = parse_fate_jobs(read_file(cl_in));
      FateOptions fo;
      fo.rtol = cfg.rtol;
      fo.atol = cfg.atol;
      fo.max_steps = cfg.max_steps;
      const auto reps = classify_batch(p, jobs, fo, cl_threads);
      std::ostringstream os;
      write_fate_csv_header(os);
      for (std::size_t i = 0; i < jobs.size(); ++i) write_fate_csv_row(os, i, jobs[i], reps[i]);
      save(out / "fates.csv", os.str());
      for (std::size_t i = 0; i < jobs.size(); ++i) std::cout << i << ' ' << to_string(reps[i].fate) << '\n';
      return 0;
    }
    if (*vf) {
      VerifyOptions vo;
      vo.params = p;
      vo.seed = cfg.seed;
      vo.threads = vf_threads;
      vo.sink_bound = cfg.sink_bound;
      if (vf_ids.empty())
        for (int i = 1; i <= kCriterionCount; ++i) vf_ids.push_back(i);
      int failed = 0;
      for (int id : vf_ids) {
        const CriterionResult r = run_criterion(id, vo);
        std::printf("[%s] %2d %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str());
        for (const auto& line : r.details) std::printf("       %s\n", line.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
      }
      std::printf("%d of %zu criteria failed\n", failed, vf_ids.size());
      return failed ? 1 : 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
