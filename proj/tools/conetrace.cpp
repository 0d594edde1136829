#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "conetrace/amplitude.hpp"
#include "conetrace/errors.hpp"
#include "conetrace/expression.hpp"
#include "conetrace/geometry.hpp"
#include "conetrace/link_spectrum.hpp"
#include "conetrace/oracle.hpp"
#include "conetrace/parallel.hpp"
#include "suites.hpp"

using json = nlohmann::json;
using namespace conetrace;

namespace {

constexpr double kPi = 3.14159265358979323846;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument: return 2;
    case ErrorKind::NoConvergence: return 4;
    case ErrorKind::ConjugateDegeneracy:
    case ErrorKind::SeriesStartFailure: return 5;
    default: return 3;
  }
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    json j = json::parse(text);
    if (!j.is_object()) config_error(path + ": top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    config_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                 e.what() + ")");
  }
}

// Typed lookups with schema diagnostics.
double get_num(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error(where + ": missing number '" + key + "'");
  if (!j.at(key).is_number()) config_error(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}
double get_num(const json& j, const char* key, const std::string& where, double fallback) {
  return j.contains(key) ? get_num(j, key, where) : fallback;
}
int get_int(const json& j, const char* key, const std::string& where, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) config_error(where + ": '" + key + "' must be an integer");
  return j.at(key).get<int>();
}
const json& get_obj(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_object()) config_error(where + ": missing object '" + key + "'");
  return j.at(key);
}
const json& get_arr(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array()) config_error(where + ": missing array '" + key + "'");
  return j.at(key);
}
std::string get_str(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) config_error(where + ": missing string '" + key + "'");
  return j.at(key).get<std::string>();
}

std::vector<double> grid(const json& g, const std::string& where) {
  const double a = get_num(g, "start", where), b = get_num(g, "stop", where);
  const int n = get_int(g, "count", where, 0);
  if (n < 1) config_error(where + ": 'count' must be a positive integer");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

SurfaceModel surface_from(const json& j) {
  const std::string where = "surface";
  if (j.contains("builtin")) {
    const std::string b = get_str(j, "builtin", where);
    if (b == "flat") return SurfaceModel::flat();
    if (b == "sphere") return SurfaceModel::sphere();
    if (b == "flat_cone") return SurfaceModel::flat_cone(get_num(j, "rho", where));
    if (b == "spindle") return SurfaceModel::spindle(get_num(j, "a", where));
    if (b == "perturbed_spindle")
      return SurfaceModel::perturbed_spindle(get_num(j, "a", where, 0.75), get_num(j, "beta", where, 0.1),
                                             get_num(j, "eps", where, 0.3), get_num(j, "r_pad", where, 0.6));
    config_error(where + ": unknown builtin '" + b + "'");
  }
  const json& ex = get_obj(j, "expressions", where);
  auto expr = [&](const char* key) {
    try {
      return Expression::parse(get_str(ex, key, where + ".expressions"));
    } catch (const Error& e) {
      config_error(where + ".expressions." + key + ": " + e.what());
    }
  };
  std::vector<TipChart> tips;
  if (j.contains("tips")) {
    for (const json& t : get_arr(j, "tips", where)) {
      TipChart c;
      c.id = get_int(t, "id", where + ".tips", static_cast<int>(tips.size()));
      c.r0 = get_num(t, "r0", where + ".tips");
      c.orientation = get_int(t, "orientation", where + ".tips", 1);
      c.cone_factor = get_num(t, "cone_factor", where + ".tips");
      c.designer_limit = get_num(t, "designer_limit", where + ".tips");
      tips.push_back(c);
    }
  }
  return SurfaceModel::from_expressions(j.value("name", std::string("custom")), expr("E"), expr("F"), expr("G"),
                                        get_num(j, "period1", where, 0.0), get_num(j, "lo0", where, -INFINITY),
                                        get_num(j, "hi0", where, INFINITY), std::move(tips));
}

SummationPolicy policy_from(const json& cfg) {
  if (!cfg.contains("policy")) return SummationPolicy::closed_form();
  const json& p = get_obj(cfg, "policy", "config");
  const std::string k = get_str(p, "kind", "policy");
  const long cutoff = get_int(p, "cutoff", "policy", 0);
  if (k == "closed_form") return SummationPolicy::closed_form();
  if (k == "abel") return SummationPolicy::abel(get_num(p, "r", "policy"), cutoff);
  if (k == "gaussian") return SummationPolicy::gaussian(get_num(p, "sigma", "policy"), cutoff);
  config_error("policy: unknown kind '" + k + "'");
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) config_error("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_link_kernel(const json& cfg, const std::string& out) {
  const json& link = get_obj(cfg, "link", "config");
  if (get_str(link, "kind", "link") != "circle") config_error("link: only kind 'circle' is supported here");
  const double rho = get_num(link, "circumference", "link");
  const int n = get_int(cfg, "n", "config", 2);
  const bool diffraction = !cfg.contains("t");
  const double t = get_num(cfg, "t", "config", kPi);
  const SummationPolicy pol = policy_from(cfg);
  const std::vector<double> us = grid(get_obj(cfg, "u_grid", "config"), "u_grid");
  const LinkSpectrum L = LinkSpectrum::circle(rho);
  std::vector<std::string> rows;
  std::size_t singular = 0;
  for (double u : us) {
    cplx v;
    bool regular = true;
    try {
      v = diffraction ? diffraction_kernel(L, n, {0.0}, {u}, pol).value : half_kg_kernel(L, n, t, {0.0}, {u}, pol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GeometricSet) throw;
      regular = false;
      ++singular;
    }
    rows.push_back(num(u) + "," + (regular ? num(v.real()) : "nan") + "," + (regular ? num(v.imag()) : "nan") + "," +
                   (regular ? "1" : "0"));
  }
  if (2 * singular > us.size())
    throw Error(ErrorKind::GeometricSet, std::to_string(singular) + " of " + std::to_string(us.size()) +
                                             " grid points lie on the geometric set");
  Output o(out);
  o.os() << "# kernel of exp(-i t nu) on a circle link, n=" << n << ", t=" << num(t)
         << "; u = y - y' in link arclength; values per unit link length\n";
  o.os() << "u,re,im,regular\n";
  for (const auto& r : rows) o.os() << r << "\n";
  return 0;
}

std::vector<SegmentSeed> seeds_from(const json& g, const std::string& where) {
  std::vector<SegmentSeed> seeds;
  for (const json& s : get_arr(g, "segments", where)) {
    SegmentSeed sd;
    sd.from_tip = get_int(s, "from", where, 0);
    sd.to_tip = get_int(s, "to", where, 0);
    sd.seed_y = get_num(s, "y", where);
    sd.min_length = get_num(s, "min_length", where, 0.0);
    seeds.push_back(sd);
  }
  if (seeds.empty()) config_error(where + ": needs at least one segment");
  return seeds;
}

ConnectOptions connect_from(const json& cfg) {
  ConnectOptions o;
  o.max_length = get_num(cfg, "max_length", "config", o.max_length);
  return o;
}

int cmd_find_geodesics(const json& cfg, const std::string& out) {
  const SurfaceModel s = surface_from(get_obj(cfg, "surface", "config"));
  const ConnectOptions co = connect_from(cfg);
  const json& list = get_arr(cfg, "geodesics", "config");
  std::vector<std::string> rows;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "geodesics[" + std::to_string(i) + "]";
    const auto seeds = seeds_from(list[i], where);
    const int repeat = get_int(list[i], "repeat", where, 1);
    try {
      const DiffractiveGeodesic g = build_closed_diffractive(s, seeds, repeat, co);
      std::string dist, kinds;
      for (std::size_t k = 0; k < g.junctions.size(); ++k) {
        dist += (k ? ";" : "") + num(g.junctions[k].link_distance);
        kinds += (k ? ";" : "") +
                 std::string(g.junctions[k].kind == Continuation::Geometric ? "geometric" : "diffractive");
      }
      rows.push_back(std::to_string(i) + ",ok," + num(g.L) + "," + num(g.L0) + "," +
                     std::to_string(g.junctions.size()) + "," + std::to_string(g.iterates) + "," +
                     (g.strictly_diffractive ? "1" : "0") + "," + dist + "," + kinds);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence) throw;
      ++failed;
      rows.push_back(std::to_string(i) + ",NoConvergence,nan,nan,0,0,0,,");
    }
  }
  if (!list.empty() && failed == list.size()) throw Error(ErrorKind::NoConvergence, "no seed converged");
  Output o(out);
  o.os() << "# surface " << s.name << "; lengths in surface arclength; junction distances in link arclength\n";
  o.os() << "index,status,L,L0,k,iterates,strictly_diffractive,junction_link_distances,junction_kinds\n";
  for (const auto& r : rows) o.os() << r << "\n";
  return 0;
}

int cmd_predict_trace(const json& cfg, const std::string& out, LengthConvention conv) {
  const SurfaceModel s = surface_from(get_obj(cfg, "surface", "config"));
  const ConnectOptions co = connect_from(cfg);
  const json& list = get_arr(cfg, "geodesics", "config");
  std::vector<TraceSingularityPrediction> preds;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "geodesics[" + std::to_string(i) + "]";
    const DiffractiveGeodesic g =
        build_closed_diffractive(s, seeds_from(list[i], where), get_int(list[i], "repeat", where, 1), co);
    try {
      preds.push_back(trace_singularity(s, g, conv));
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  }
  std::size_t kmax = 0;
  for (const auto& p : preds) kmax = std::max(kmax, p.segments.size());
  Output o(out);
  o.os() << "# frame: metric half-density; phase (t - L) xi; amplitude coefficient of "
            "integral e^{-i(t-L)xi} chi(xi) xi^{-order} dxi; prefactor "
         << (conv == LengthConvention::Primitive ? "L0" : "L") << "\n";
  o.os() << "L,L0,k,n,order,re_coeff,im_coeff,model";
  for (std::size_t j = 0; j < kmax; ++j)
    o.os() << ",d_" << j << ",m_" << j << ",theta_" << j << ",re_D_" << j << ",im_D_" << j;
  o.os() << "\n";
  for (const auto& p : preds) {
    o.os() << num(p.L) << "," << num(p.L0) << "," << p.k << "," << p.n << "," << num(p.order) << ","
           << num(p.coefficient.real()) << "," << num(p.coefficient.imag()) << "," << model_name(p.model);
    for (std::size_t j = 0; j < kmax; ++j) {
      if (j < p.segments.size()) {
        const auto& sg = p.segments[j];
        const cplx D = p.diffractions[j].value;
        o.os() << "," << num(sg.length) << "," << sg.morse_index << "," << num(sg.theta) << "," << num(D.real())
               << "," << num(D.imag());
      } else {
        o.os() << ",,,,,";
      }
    }
    o.os() << "\n";
  }
  if (cfg.contains("model_kernel")) {
    const json& mk = get_obj(cfg, "model_kernel", "config");
    const std::string path = get_str(mk, "out", "model_kernel");
    const std::vector<double> ts = grid(mk, "model_kernel");
    ModelKernelOptions mo;
    mo.smoothing_sigma = get_num(mk, "sigma", "model_kernel", 0.0);
    const int which = get_int(mk, "geodesic", "model_kernel", 0);
    if (which < 0 || which >= static_cast<int>(preds.size())) config_error("model_kernel: bad 'geodesic' index");
    const std::vector<cplx> v = model_kernel(preds[which], CutoffSpec{}, ts, mo);
    Output k(path);
    k.os() << "# model kernel for geodesic " << which << ", sigma " << num(mo.smoothing_sigma) << "; t in arclength\n";
    k.os() << "t,re,im\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
      k.os() << num(ts[i]) << "," << num(v[i].real()) << "," << num(v[i].imag()) << "\n";
  }
  return 0;
}

std::vector<double> read_eigenvalues(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open eigenvalue file '" + path + "'");
  std::vector<double> ev;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty() || line[0] == '#') continue;
    try {
      std::size_t used = 0;
      ev.push_back(std::stod(line, &used));
    } catch (const std::exception&) {
      if (ev.empty() && ln == 1) continue;  // header row
      config_error(path + ":" + std::to_string(ln) + ": not a number");
    }
  }
  return ev;
}

int cmd_spectral_trace(const json& cfg, const std::string& out) {
  std::vector<double> ev;
  if (cfg.contains("eigenvalues")) {
    ev = read_eigenvalues(get_str(cfg, "eigenvalues", "config"));
  } else if (cfg.contains("doubled_square")) {
    ev = doubled_square_spectrum(get_num(get_obj(cfg, "doubled_square", "config"), "lambda_max", "doubled_square"));
  } else {
    config_error("config: needs 'eigenvalues' (CSV path) or 'doubled_square'");
  }
  if (cfg.contains("write_eigenvalues")) {
    Output e(get_str(cfg, "write_eigenvalues", "config"));
    e.os() << "lambda\n";
    for (double l : ev) e.os() << num(l) << "\n";
  }
  const double sigma = get_num(cfg, "sigma", "config");
  const std::vector<double> ts = grid(get_obj(cfg, "grid", "config"), "grid");
  const SmoothedTrace tr = smoothed_wave_trace(ev, sigma, ts);
  Output o(out);
  o.os() << "# sum over eigenvalues of exp(-i t lambda) exp(-lambda^2 / (2 sigma^2)), sigma " << num(sigma) << ", "
         << ev.size() << " eigenvalues; t in arclength\n";
  o.os() << "t,re,im\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    o.os() << num(ts[i]) << "," << num(tr.samples[i].real()) << "," << num(tr.samples[i].imag()) << "\n";
  if (cfg.contains("fit")) {
    const json& f = get_obj(cfg, "fit", "config");
    const double L = get_num(f, "L", "fit"), W = get_num(f, "window", "fit");
    const double order = get_num(f, "order", "fit");
    std::vector<double> ft;
    std::vector<cplx> fs;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (std::abs(ts[i] - L) <= W) {
        ft.push_back(ts[i]);
        fs.push_back(tr.samples[i]);
      }
    }
    SmoothedTrace sub{tr.eigenvalues, sigma, ft, fs};
    ModelKernelOptions mo;
    mo.smoothing_sigma = sigma;
    const TraceFit fit = fit_trace_singularity(sub, L, model_kernel(order, L, CutoffSpec{}, ft, mo), W);
    o.os() << "# fit L=" << num(L) << " order=" << num(order) << " window=" << num(W) << "\n";
    o.os() << "# C_re=" << num(fit.C.real()) << " C_im=" << num(fit.C.imag()) << " residual=" << num(fit.residual)
           << " condition=" << num(fit.condition) << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& suite, const std::vector<std::string>& tol_args, const std::string& out) {
  verify::Tolerances tol = verify::default_tolerances();
  for (const auto& kv : tol_args) verify::apply_override(tol, kv);
  const std::vector<int> ids = verify::suite_criteria(suite);
  json report;
  report["suite"] = suite;
  report["tolerances"] = tol;
  bool all = true;
  for (int id : ids) {
    const verify::CriterionResult r = verify::run_criterion(id, tol);
    std::cout << verify::summary_line(r) << std::endl;
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    report["criteria"].push_back(
        {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds}, {"detail", r.detail}, {"metrics", m}});
    all = all && r.passed;
  }
  report["passed"] = all;
  if (!out.empty()) {
    Output o(out);
    o.os() << report.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-trace invariants of diffractive closed geodesics on conic surfaces"};
  app.require_subcommand(1);
  app.fallthrough();  // subcommands inherit this at creation
  std::string config, out, suite, convention = "L0";
  std::vector<std::string> tols;
  int threads = -1;
  app.add_option("--threads", threads, "worker threads (default: CONETRACE_THREADS or hardware)");
  app.add_option("--convention", convention, "trace prefactor length")->check(CLI::IsMember({"L0", "L"}));
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--tol", tols, "tolerance override KEY=VAL (repeatable)");
  auto* lk = app.add_subcommand("link-kernel", "tabulate the diffraction or half-wave link kernel");
  auto* fg = app.add_subcommand("find-geodesics", "solve closed diffractive geodesics from seeds");
  auto* pt = app.add_subcommand("predict-trace", "leading wave-trace singularity of closed diffractive geodesics");
  auto* sp = app.add_subcommand("spectral-trace", "smoothed wave trace from an eigenvalue list");
  auto* vf = app.add_subcommand("verify", "run acceptance criteria");
  for (auto* sc : {lk, fg, pt, sp}) sc->add_option("--config", config, "JSON config")->required();
  vf->add_option("--suite", suite, "suite name: link front jacobi composition trace spectral all")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (threads < 0) {
      if (const char* env = std::getenv("CONETRACE_THREADS")) {
        try {
          threads = std::stoi(env);
        } catch (const std::exception&) {
          config_error("CONETRACE_THREADS must be an integer");
        }
      }
    }
    if (threads >= 0) set_thread_count(threads);
    const LengthConvention conv = convention == "L" ? LengthConvention::Full : LengthConvention::Primitive;
    if (*vf) return cmd_verify(suite, tols, out);
    const json cfg = load_config(config);
    if (cfg.contains("deterministic") && !cfg.at("deterministic").is_boolean())
      config_error("config: 'deterministic' must be a boolean");
    if (*lk) return cmd_link_kernel(cfg, out);
    if (*fg) return cmd_find_geodesics(cfg, out);
    if (*pt) return cmd_predict_trace(cfg, out, conv);
    if (*sp) return cmd_spectral_trace(cfg, out);
  } catch (const Error& e) {
    std::cerr << "conetrace: " << e.what() << std::endl;
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "conetrace: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
