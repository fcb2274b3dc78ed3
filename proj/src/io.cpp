#include "schwarziso/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace schwarziso {

using nlohmann::json;

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// nlohmann serializes doubles with the shortest round-trip form; we want the
// fixed 17-digit form everywhere, so JSON text is assembled through this.
json num(double x) {
  if (!std::isfinite(x)) return fmt17(x);
  return json::parse(fmt17(x));
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw InvalidInput("unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing key '") + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw InvalidInput(std::string("key '") + key + "' in " + where + " must be a number");
  return v.get<double>();
}

ModelParams params_from(const json& j) {
  reject_unknown(j, {"M", "m", "A", "A1", "B", "B1"}, "params");
  ModelParams p;
  p.M = get_number(j, "M", "params");
  p.m = get_number(j, "m", "params");
  p.A = get_number(j, "A", "params");
  p.A1 = get_number(j, "A1", "params");
  p.B = get_number(j, "B", "params");
  p.B1 = get_number(j, "B1", "params");
  validate(p);
  return p;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

json complex_json(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

json spectrum_json(const Spectrum& s) {
  json a = json::array();
  for (auto z : s) a.push_back(complex_json(z));
  return a;
}

}  // namespace

ModelParams parse_params(const std::string& text) { return params_from(parse_text(text)); }

RunConfig parse_run_config(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  RunConfig cfg;
  if (!j.contains("params") && j.contains("M")) {
    cfg.params = params_from(j);
    return cfg;
  }
  reject_unknown(j, {"params", "energy_convention", "tolerances", "mu_threshold", "sink_bound", "seed",
                     "output_dir"},
                 "config");
  if (!j.contains("params")) throw InvalidInput("config needs a 'params' object");
  cfg.params = params_from(j.at("params"));
  if (j.contains("energy_convention")) {
    if (!j.at("energy_convention").is_string()) throw InvalidInput("energy_convention must be a string");
    cfg.convention = energy_convention_from_string(j.at("energy_convention").get<std::string>());
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, {"rtol", "atol", "max_steps"}, "tolerances");
    if (t.contains("rtol")) cfg.rtol = get_number(t, "rtol", "tolerances");
    if (t.contains("atol")) cfg.atol = get_number(t, "atol", "tolerances");
    if (t.contains("max_steps")) {
      if (!t.at("max_steps").is_number_integer()) throw InvalidInput("max_steps must be an integer");
      cfg.max_steps = t.at("max_steps").get<long>();
    }
    if (!(cfg.rtol > 0) || !(cfg.atol > 0) || cfg.max_steps < 1)
      throw InvalidInput("tolerances must be positive");
  }
  if (j.contains("mu_threshold")) cfg.mu_threshold = get_number(j, "mu_threshold", "config");
  if (j.contains("sink_bound")) {
    if (!j.at("sink_bound").is_string()) throw InvalidInput("sink_bound must be a string");
    cfg.sink_bound = sink_bound_from_string(j.at("sink_bound").get<std::string>());
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InvalidInput("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw InvalidInput("output_dir must be a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string params_json(const ModelParams& p) {
  json j;
  j["M"] = num(p.M);
  j["m"] = num(p.m);
  j["A"] = num(p.A);
  j["A1"] = num(p.A1);
  j["B"] = num(p.B);
  j["B1"] = num(p.B1);
  return j.dump(2);
}

std::string derived_json(const DerivedConstants& d) {
  json j;
  j["mu"] = num(d.mu);
  j["alpha"] = num(d.alpha);
  j["beta"] = num(d.beta);
  j["C0"] = num(d.C0);
  j["V0"] = num(d.V0);
  j["W0"] = num(d.W0);
  j["gamma"] = num(d.gamma);
  j["theta_v"] = d.theta_v ? num(*d.theta_v) : json(nullptr);
  j["theta_w"] = d.theta_w ? num(*d.theta_w) : json(nullptr);
  j["regime"] = {{"mu_threshold", num(d.regime.mu_threshold)},
                 {"mu_large", d.regime.mu_large},
                 {"cond_A", d.regime.cond_A},
                 {"cond_B", d.regime.cond_B},
                 {"generic", d.regime.generic}};
  return j.dump(2);
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
  IntegratorOptions o;
  o.rtol = cfg.rtol;
  o.atol = cfg.atol;
  o.max_steps = cfg.max_steps;
  return o;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "# chart=" << to_string(tr.chart) << " status=" << to_string(tr.status) << '\n';
  os << (tr.chart == Chart::profile ? "theta" : "t");
  for (const auto& c : chart_columns(tr.chart, tr.with_phase)) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << fmt17(tr.t[i]);
    for (int k = 0; k < tr.states[i].size(); ++k) os << ',' << fmt17(tr.states[i](k));
    os << '\n';
  }
}

std::string events_json(const Trajectory& tr) {
  json a = json::array();
  for (const auto& e : tr.events) {
    json s = json::array();
    for (int k = 0; k < e.state.size(); ++k) s.push_back(num(e.state(k)));
    a.push_back({{"t", num(e.t)}, {"label", e.label}, {"terminal", e.terminal}, {"state", s}});
  }
  return a.dump(2);
}

void write_em_csv(std::ostream& os, const std::vector<EMPoint>& pts) {
  os << "R,C,h,branch\n";
  for (const auto& e : pts)
    os << fmt17(e.R) << ',' << fmt17(e.C) << ',' << fmt17(e.h) << ',' << to_string(e.branch) << '\n';
}

void write_planar_csv(std::ostream& os, double C, double h, const std::vector<PlanarSample>& s) {
  os << "C,h,r,v_plus,v_minus,radicand\n";
  for (const auto& p : s)
    os << fmt17(C) << ',' << fmt17(h) << ',' << fmt17(p.r) << ',' << fmt17(p.v) << ',' << fmt17(-p.v) << ','
       << fmt17(p.radicand) << '\n';
}

void write_fate_csv_header(std::ostream& os) {
  os << "index,C,h,r0,v0,theta0,w0,fate,limiting_theta,winding,plane_crossings,"
        "crossings_terminal_decade,collision_r,r_end,v_end,theta_end,w_end,max_r_increase,"
        "max_v_increase,steps,max_residual,status,note\n";
}

void write_fate_csv_row(std::ostream& os, std::size_t index, const FateJob& job, const FateReport& r) {
  std::string note = r.note;
  std::replace(note.begin(), note.end(), ',', ';');
  os << index << ',' << fmt17(job.C) << ',' << fmt17(job.h) << ',' << fmt17(job.state0.r) << ','
     << fmt17(job.state0.v) << ',' << fmt17(job.state0.theta) << ',' << fmt17(job.state0.w) << ','
     << to_string(r.fate) << ',' << (r.limiting_theta ? fmt17(*r.limiting_theta) : "") << ','
     << fmt17(r.winding) << ',' << r.plane_crossings << ',' << r.crossings_in_terminal_decade << ','
     << (r.collision_r ? fmt17(*r.collision_r) : "") << ',' << fmt17(r.final_state.r) << ','
     << fmt17(r.final_state.v) << ',' << fmt17(r.final_state.theta) << ',' << fmt17(r.final_state.w) << ','
     << fmt17(r.max_r_increase) << ',' << fmt17(r.max_v_increase) << ',' << r.steps << ','
     << fmt17(r.max_residual) << ',' << to_string(r.status) << ',' << note << '\n';
}

std::string equilibria_json(const std::vector<EquilibriumInfo>& eqs, EnergyConvention conv) {
  json a = json::array();
  for (const auto& e : eqs) {
    json ev = json::array(), cf = json::array();
    for (auto z : e.eigenvalues) ev.push_back(complex_json(z));
    for (auto z : e.closed_form_eigenvalues) cf.push_back(complex_json(z));
    a.push_back({{"R", num(e.R)},
                 {"z", num(e.z)},
                 {"C", num(e.C)},
                 {"h", num(e.h)},
                 {"kind", to_string(e.kind)},
                 {"eigenvalues", ev},
                 {"closed_form_eigenvalues", cf},
                 {"f_value", num(e.f_value)},
                 {"hessian_positive_definite", e.hessian_positive_definite},
                 {"gradient_norm", num(e.gradient_norm)}});
  }
  json j;
  j["energy_convention"] = to_string(conv);
  j["equilibria"] = a;
  return j.dump(2);
}

std::string manifold_json(const ModelParams& p, const std::vector<CMEquilibrium>& eqs,
                          const ConnectionCondition& cc) {
  json a = json::array();
  for (const auto& e : eqs) {
    a.push_back({{"name", to_string(e.name)},
                 {"state", {num(e.state.r), num(e.state.v), num(e.state.theta), num(e.state.w)}},
                 {"classification", to_string(e.classification)},
                 {"dim_unstable", e.dim_unstable},
                 {"dim_stable", e.dim_stable},
                 {"radial_eigenvalue", num(e.radial_eigenvalue)},
                 {"tangent_eigenvalues", spectrum_json(e.tangent_eigenvalues)},
                 {"tangent_eigenvalues_explicit_basis", spectrum_json(e.tangent_eigenvalues_explicit_basis)},
                 {"closed_form", spectrum_json(e.closed_form)},
                 {"delta_eigenvalues", spectrum_json(e.delta_eigenvalues)},
                 {"delta_closed_form", spectrum_json(e.delta_closed_form)}});
  }
  json j;
  j["equilibria"] = a;
  j["q_printed_discriminant_pair"] = spectrum_json(q_closed_form_pair(p, 1.0));
  j["connection_condition"] = {{"lhs", num(cc.lhs)},
                               {"rhs", num(cc.rhs)},
                               {"cond_up_holds", cc.cond_up_holds},
                               {"param_lhs", num(cc.param_lhs)},
                               {"param_rhs", num(cc.param_rhs)},
                               {"sqrt_Y", num(cc.sqrt_Y)},
                               {"cond_param_holds", cc.cond_param_holds},
                               {"agree", cc.agree}};
  return j.dump(2);
}

std::string fate_json(const FateReport& r) {
  json j;
  j["fate"] = to_string(r.fate);
  j["limiting_theta"] = r.limiting_theta ? num(*r.limiting_theta) : json(nullptr);
  j["winding"] = num(r.winding);
  j["plane_crossings"] = r.plane_crossings;
  j["crossings_in_terminal_decade"] = r.crossings_in_terminal_decade;
  j["collision_r"] = r.collision_r ? num(*r.collision_r) : json(nullptr);
  j["final_state"] = {num(r.final_state.r), num(r.final_state.v), num(r.final_state.theta),
                      num(r.final_state.w)};
  j["max_r_increase"] = num(r.max_r_increase);
  j["max_v_increase"] = num(r.max_v_increase);
  j["t_reduced"] = num(r.t_reduced);
  j["sigma_regularized"] = num(r.sigma_regularized);
  j["steps"] = r.steps;
  j["max_residual"] = num(r.max_residual);
  j["status"] = to_string(r.status);
  j["note"] = r.note;
  return j.dump(2);
}

std::vector<FateJob> parse_fate_jobs(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_array()) throw InvalidInput("batch input must be a JSON array");
  std::vector<FateJob> jobs;
  for (const auto& e : j) {
    reject_unknown(e, {"C", "h", "state0"}, "batch entry");
    FateJob job;
    job.C = get_number(e, "C", "batch entry");
    job.h = get_number(e, "h", "batch entry");
    if (!e.contains("state0")) throw InvalidInput("batch entry needs state0");
    const json& s = e.at("state0");
    reject_unknown(s, {"r", "v", "theta", "w"}, "state0");
    job.state0 = {get_number(s, "r", "state0"), get_number(s, "v", "state0"), get_number(s, "theta", "state0"),
                  get_number(s, "w", "state0")};
    jobs.push_back(job);
  }
  return jobs;
}

std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<SvgSeries>& series, int width, int height) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y0 -= 1, y1 += 1;
  const double ml = 70, mr = 150, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream o;
  char buf[64];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (y0 < 0 && y1 > 0)
    o << "<line x1=\"" << ml << "\" y1=\"" << Y(0) << "\" x2=\"" << ml + pw << "\" y2=\"" << Y(0)
      << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
  auto tick = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };
  o << "<text x=\"" << ml << "\" y=\"" << mt + ph + 18 << "\" font-size=\"11\">" << tick(x0) << "</text>\n";
  o << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
    << tick(x1) << "</text>\n";
  o << "<text x=\"" << ml - 5 << "\" y=\"" << mt + ph << "\" font-size=\"11\" text-anchor=\"end\">" << tick(y0)
    << "</text>\n";
  o << "<text x=\"" << ml - 5 << "\" y=\"" << mt + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << tick(y1)
    << "</text>\n";
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
    << xlabel << "</text>\n";
  o << "<text x=\"15\" y=\"" << mt + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << mt + ph / 2
    << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 7];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(s.x[i]), Y(s.y[i]));
      pts += buf;
    }
    flush();
    o << "<text x=\"" << ml + pw + 10 << "\" y=\"" << mt + 15 + 16 * k << "\" font-size=\"11\" fill=\"" << col
      << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

}  // namespace schwarziso
