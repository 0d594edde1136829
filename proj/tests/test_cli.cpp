#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "conetrace/geometry.hpp"
#include "conetrace/link_spectrum.hpp"
#include "conetrace/oracle.hpp"
#include "conetrace/amplitude.hpp"

using namespace conetrace;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string tmp(const std::string& name) {
  fs::create_directories(CONETRACE_TEST_TMP);
  return (fs::path(CONETRACE_TEST_TMP) / name).string();
}

std::string write(const std::string& name, const std::string& text) {
  const std::string p = tmp(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const std::string& stem) {
  const std::string cmd = std::string("\"") + CONETRACE_CLI + "\" " + args + " > \"" + tmp(stem + ".stdout") +
                          "\" 2> \"" + tmp(stem + ".stderr") + "\"";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Data rows of a CSV (comment lines and the header skipped).
std::vector<std::vector<std::string>> rows(const std::string& path) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(slurp(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

const char* kSpindleLoops = R"({
  "surface": {"builtin": "perturbed_spindle"},
  "max_length": 12,
  "geodesics": [
    {"segments": [{"from": 0, "to": 1, "y": 0.0}, {"from": 1, "to": 0, "y": 2.356194490}]},
    {"segments": [{"from": 0, "to": 1, "y": 0.0}, {"from": 1, "to": 0, "y": 2.356194490}], "repeat": 2}
  ]
})";
}  // namespace

TEST_CASE("link-kernel on orbifold and generic circles") {
  const std::string zero = write("lk_pi.json", R"({"link": {"kind": "circle", "circumference": 3.141592653589793},
    "u_grid": {"start": 0.1, "stop": 1.4, "count": 14}})");
  REQUIRE(run("link-kernel --config " + zero + " --out " + tmp("lk_pi.csv"), "lk_pi") == 0);
  const auto z = rows(tmp("lk_pi.csv"));
  REQUIRE(z.size() == 14);
  for (const auto& r : z) {
    CHECK(std::abs(std::stod(r[1])) <= 1e-12);
    CHECK(std::abs(std::stod(r[2])) <= 1e-12);
  }

  const std::string gen = write("lk_gen.json", R"({"link": {"kind": "circle", "circumference": 4.71238898038469},
    "u_grid": {"start": -2.0, "stop": 2.0, "count": 9}})");
  REQUIRE(run("link-kernel --config " + gen + " --out " + tmp("lk_gen.csv"), "lk_gen") == 0);
  const auto g = rows(tmp("lk_gen.csv"));
  REQUIRE(g.size() == 9);
  const auto link = LinkSpectrum::circle(4.71238898038469);
  for (const auto& r : g) {
    const double u = std::stod(r[0]);
    const cplx want = diffraction_kernel(link, 2, {0.0}, {u}, SummationPolicy::closed_form()).value;
    CHECK(std::stod(r[1]) == want.real());
    CHECK(std::stod(r[2]) == want.imag());
  }
}

TEST_CASE("configuration errors exit with code 2") {
  const std::string bad = write("bad.json", "{\n  \"link\": {\"kind\": \"circle\",,\n}\n");
  CHECK(run("link-kernel --config " + bad, "bad") == 2);
  CHECK(slurp(tmp("bad.stderr")).find(bad + ":2:") != std::string::npos);
  CHECK(run("verify --suite nope", "suite") == 2);
  CHECK(run("link-kernel", "noconfig") == 2);
  CHECK(run("link-kernel --config " + write("nolink.json", "{}"), "nolink") == 2);
}

TEST_CASE("verify link suite passes") {
  CHECK(run("verify --suite link --out " + tmp("verify.json"), "verify") == 0);
  const std::string out = slurp(tmp("verify.stdout"));
  CHECK(out.find("criterion 1") != std::string::npos);
  CHECK(out.find("criterion 2") != std::string::npos);
  CHECK(slurp(tmp("verify.json")).find("\"passed\": true") != std::string::npos);
}

TEST_CASE("find-geodesics matches the library and is reproducible") {
  const std::string cfg = write("fg.json", kSpindleLoops);
  REQUIRE(run("find-geodesics --config " + cfg + " --out " + tmp("fg1.csv"), "fg1") == 0);
  REQUIRE(run("--threads 2 find-geodesics --config " + cfg + " --out " + tmp("fg2.csv"), "fg2") == 0);
  CHECK(slurp(tmp("fg1.csv")) == slurp(tmp("fg2.csv")));
  const auto r = rows(tmp("fg1.csv"));
  REQUIRE(r.size() == 2);
  ConnectOptions o;
  o.max_length = 12;
  const auto g = build_closed_diffractive(SurfaceModel::perturbed_spindle(),
                                          {{0, 1, 0.0, 0.0}, {1, 0, 2.356194490, 0.0}}, 1, o);
  CHECK(r[0][1] == "ok");
  CHECK(std::stod(r[0][2]) == g.L);
  CHECK(std::stod(r[1][2]) == doctest::Approx(2 * g.L).epsilon(1e-12));
  CHECK(r[1][5] == "2");
}

TEST_CASE("solver failures map to exit codes") {
  const std::string nc = write("nc.json", R"({"surface": {"builtin": "perturbed_spindle"}, "max_length": 0.5,
    "geodesics": [{"segments": [{"from": 0, "to": 1, "y": 0.0}, {"from": 1, "to": 0, "y": 2.356194490}]}]})");
  CHECK(run("find-geodesics --config " + nc, "nc") == 4);
  const std::string sym = write("sym.json", R"({"surface": {"builtin": "spindle", "a": 0.75}, "max_length": 12,
    "geodesics": [{"segments": [{"from": 0, "to": 1, "y": 0.3}, {"from": 1, "to": 0, "y": 0.3}]}]})");
  CHECK(run("predict-trace --config " + sym, "sym") == 5);
}

TEST_CASE("predict-trace length convention") {
  const std::string cfg = write("pt.json", kSpindleLoops);
  REQUIRE(run("predict-trace --config " + cfg + " --out " + tmp("pt_l0.csv"), "pt_l0") == 0);
  REQUIRE(run("--convention L predict-trace --config " + cfg + " --out " + tmp("pt_l.csv"), "pt_l") == 0);
  const auto a = rows(tmp("pt_l0.csv")), b = rows(tmp("pt_l.csv"));
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const double ratio = std::stod(a[i][0]) / std::stod(a[i][1]);
    CHECK(std::stod(b[i][5]) / std::stod(a[i][5]) == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(std::stod(b[i][6]) / std::stod(a[i][6]) == doctest::Approx(ratio).epsilon(1e-12));
  }
  CHECK(a[0][7] == "Log");
}

TEST_CASE("spectral-trace fit equals the library fit") {
  const double L = 2 + std::sqrt(2.0);
  const std::string cfg = write("sp.json", R"({"doubled_square": {"lambda_max": 400}, "sigma": 20,
    "grid": {"start": 3.2, "stop": 3.6, "count": 161}, "fit": {"L": 3.414213562373095, "order": 1.5, "window": 0.15}})");
  REQUIRE(run("spectral-trace --config " + cfg + " --out " + tmp("sp1.csv"), "sp1") == 0);
  REQUIRE(run("--threads 3 spectral-trace --config " + cfg + " --out " + tmp("sp3.csv"), "sp3") == 0);
  const std::string text = slurp(tmp("sp1.csv"));
  CHECK(text == slurp(tmp("sp3.csv")));

  std::vector<double> ts;
  for (const auto& r : rows(tmp("sp1.csv"))) ts.push_back(std::stod(r[0]));
  REQUIRE(ts.size() == 161);
  const auto tr = smoothed_wave_trace(doubled_square_spectrum(400), 20.0, ts);
  std::vector<double> ft;
  std::vector<cplx> fsm;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - 3.414213562373095) <= 0.15) {
      ft.push_back(ts[i]);
      fsm.push_back(tr.samples[i]);
    }
  ModelKernelOptions mo;
  mo.smoothing_sigma = 20.0;
  const TraceFit fit = fit_trace_singularity({tr.eigenvalues, 20.0, ft, fsm}, 3.414213562373095,
                                             model_kernel(1.5, 3.414213562373095, CutoffSpec{}, ft, mo), 0.15);
  const auto pos = text.find("# C_re=");
  REQUIRE(pos != std::string::npos);
  std::istringstream in(text.substr(pos + 7));
  double c_re = 0;
  in >> c_re;
  CHECK(c_re == fit.C.real());
  CHECK(L == doctest::Approx(3.414213562373095));
}
