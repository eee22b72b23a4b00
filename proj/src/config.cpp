#include "reslab/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace reslab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

double positive(const json& v, const std::string& where) {
  const double x = number(v, where);
  if (!(x > 0.0) || !std::isfinite(x)) fail(where, "must be positive");
  return x;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Vec3 vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where, "expected [x, y, z]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]"), number(v[2], where + "[2]")};
}

template <class T, class F>
std::vector<T> list(const json& v, const std::string& where, F item) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out.push_back(item(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

// [[n, re, im], ...] with n != 0; missing c_{-n} filled by conjugation.
FourierSeries series(const json& v, double omega, const std::string& where) {
  std::map<int, std::complex<double>> coeffs;
  if (!v.is_array()) fail(where, "expected a list of [n, re, im] triples");
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const json& t = v[k];
    if (!t.is_array() || t.size() != 3) fail(at, "expected [n, re, im]");
    const int n = integer(t[0], at + "[0]");
    const std::complex<double> c(number(t[1], at + "[1]"), number(t[2], at + "[2]"));
    if (n == 0) {
      if (c != std::complex<double>(1.0)) fail(at, "zero mode must be [0, 1, 0]");
      continue;
    }
    if (coeffs.count(n)) fail(at, "duplicate mode " + std::to_string(n));
    coeffs[n] = c;
  }
  int order = 0;
  for (const auto& [n, c] : coeffs) order = std::max(order, std::abs(n));
  std::vector<std::complex<double>> dense(static_cast<std::size_t>(2 * order + 1), 0.0);
  dense[static_cast<std::size_t>(order)] = 1.0;
  for (const auto& [n, c] : coeffs) {
    dense[static_cast<std::size_t>(n + order)] = c;
    if (!coeffs.count(-n)) dense[static_cast<std::size_t>(order - n)] = std::conj(c);
  }
  try {
    return FourierSeries(std::move(dense), omega);
  } catch (const InputError& e) {
    fail(where, e.what());
  }
}

ModulationProfile modulation(const json& v) {
  allow_keys(v, "modulation", {"omega", "epsilon", "resonators"});
  if (!v.contains("omega")) fail("modulation", "missing \"omega\"");
  ModulationProfile p;
  p.omega = positive(v["omega"], "modulation.omega");
  if (v.contains("epsilon")) {
    p.epsilon = number(v["epsilon"], "modulation.epsilon");
    if (!(p.epsilon >= 0.0)) fail("modulation.epsilon", "must be >= 0");
  }
  if (!v.contains("resonators")) fail("modulation", "missing \"resonators\"");
  const json& res = v["resonators"];
  if (!res.is_array() || res.empty()) fail("modulation.resonators", "expected a non-empty array");
  for (std::size_t i = 0; i < res.size(); ++i) {
    const std::string at = "modulation.resonators[" + std::to_string(i) + "]";
    allow_keys(res[i], at, {"rho_inv", "kappa_inv"});
    p.rho_inv.push_back(res[i].contains("rho_inv")
                            ? series(res[i]["rho_inv"], p.omega, at + ".rho_inv")
                            : FourierSeries::constant(1.0, p.omega));
    p.kappa_inv.push_back(res[i].contains("kappa_inv")
                              ? series(res[i]["kappa_inv"], p.omega, at + ".kappa_inv")
                              : FourierSeries::constant(1.0, p.omega));
  }
  return p;
}

void geometry(const json& v, ExperimentConfig& cfg) {
  allow_keys(v, "geometry", {"spheres", "dilute"});
  if (v.contains("spheres") == v.contains("dilute"))
    fail("geometry", "give exactly one of \"spheres\" or \"dilute\"");
  if (v.contains("spheres")) {
    cfg.spheres = list<Sphere>(v["spheres"], "geometry.spheres", [](const json& s, const std::string& at) {
      allow_keys(s, at, {"center", "radius"});
      if (!s.contains("center") || !s.contains("radius")) fail(at, "needs \"center\" and \"radius\"");
      return Sphere{vec3(s["center"], at + ".center"), positive(s["radius"], at + ".radius")};
    });
    return;
  }
  const json& d = v["dilute"];
  allow_keys(d, "geometry.dilute", {"base_radius", "centers", "eta"});
  DiluteSpec spec;
  if (d.contains("base_radius")) spec.base_radius = positive(d["base_radius"], "geometry.dilute.base_radius");
  if (!d.contains("centers")) fail("geometry.dilute", "missing \"centers\"");
  spec.centers = list<Vec3>(d["centers"], "geometry.dilute.centers", vec3);
  if (d.contains("eta")) spec.eta = number(d["eta"], "geometry.dilute.eta");
  if (!(spec.eta > 0.0 && spec.eta < 1.0)) fail("geometry.dilute.eta", "must lie in (0, 1)");
  cfg.dilute = spec;
}

void numerics(const json& v, NumericsConfig& n) {
  allow_keys(v, "numerics", {"refinement", "refinement_sweep", "tol", "det_tol", "max_raw_asymmetry",
                             "grid", "transform_tol", "epsilon_sweep", "eta_sweep", "capB"});
  auto nonneg_int = [](const json& x, const std::string& at) {
    const int r = integer(x, at);
    if (r < 0) fail(at, "must be >= 0");
    return r;
  };
  if (v.contains("refinement")) n.refinement = nonneg_int(v["refinement"], "numerics.refinement");
  if (v.contains("refinement_sweep"))
    n.refinement_sweep = list<int>(v["refinement_sweep"], "numerics.refinement_sweep", nonneg_int);
  if (v.contains("tol")) n.tol = positive(v["tol"], "numerics.tol");
  if (v.contains("det_tol")) n.det_tol = positive(v["det_tol"], "numerics.det_tol");
  if (v.contains("max_raw_asymmetry"))
    n.max_raw_asymmetry = positive(v["max_raw_asymmetry"], "numerics.max_raw_asymmetry");
  if (v.contains("grid")) {
    n.grid = integer(v["grid"], "numerics.grid");
    if (n.grid < 4) fail("numerics.grid", "must be at least 4");
  }
  if (v.contains("transform_tol")) n.transform_tol = positive(v["transform_tol"], "numerics.transform_tol");
  if (v.contains("epsilon_sweep")) {
    n.epsilon_sweep = list<double>(v["epsilon_sweep"], "numerics.epsilon_sweep", [](const json& x, const std::string& at) {
      const double e = number(x, at);
      if (!(e >= 0.0)) fail(at, "must be >= 0");
      return e;
    });
  }
  if (v.contains("eta_sweep")) {
    n.eta_sweep = list<double>(v["eta_sweep"], "numerics.eta_sweep", [](const json& x, const std::string& at) {
      const double e = number(x, at);
      if (!(e > 0.0 && e < 1.0)) fail(at, "must lie in (0, 1)");
      return e;
    });
  }
  if (v.contains("capB")) {
    if (!v["capB"].is_string()) fail("numerics.capB", "expected \"bem\" or \"analytic\"");
    const auto s = v["capB"].get<std::string>();
    if (s != "bem" && s != "analytic") fail("numerics.capB", "expected \"bem\" or \"analytic\"");
    n.bem_capB = s == "bem";
  }
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the byte after the offending character.
  if (col > 1) --col;
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ResonatorSystem ExperimentConfig::system() const {
  return dilute ? system_at(dilute->eta) : ResonatorSystem(spheres, materials);
}

ResonatorSystem ExperimentConfig::system_at(double eta) const {
  if (!dilute) throw ConfigError("geometry: a dilute specification is required");
  return dilute_system(dilute->base_radius, dilute->centers, eta, materials);
}

std::size_t ExperimentConfig::resonators() const {
  return dilute ? dilute->centers.size() : spheres.size();
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  allow_keys(root, "config", {"geometry", "materials", "modulation", "numerics", "tightbinding"});
  ExperimentConfig cfg;
  if (!root.contains("geometry")) fail("config", "missing \"geometry\"");
  geometry(root["geometry"], cfg);
  if (root.contains("materials")) {
    const json& m = root["materials"];
    allow_keys(m, "materials", {"delta", "kappa_r", "rho_r"});
    if (m.contains("delta")) cfg.materials.delta = positive(m["delta"], "materials.delta");
    if (m.contains("kappa_r")) cfg.materials.kappa_r = positive(m["kappa_r"], "materials.kappa_r");
    if (m.contains("rho_r")) cfg.materials.rho_r = positive(m["rho_r"], "materials.rho_r");
  }
  if (root.contains("modulation")) {
    cfg.modulation = modulation(root["modulation"]);
    if (cfg.modulation->size() != cfg.resonators())
      fail("modulation.resonators", "expected one entry per resonator (" +
                                        std::to_string(cfg.resonators()) + ")");
  }
  if (root.contains("numerics")) numerics(root["numerics"], cfg.numerics);
  if (root.contains("tightbinding")) {
    const json& t = root["tightbinding"];
    allow_keys(t, "tightbinding", {"adjacency"});
    if (t.contains("adjacency")) {
      const int n = static_cast<int>(cfg.resonators());
      std::vector<std::pair<int, int>> adj;
      const json& a = t["adjacency"];
      if (!a.is_array()) fail("tightbinding.adjacency", "expected a list of [j, k] pairs");
      for (std::size_t k = 0; k < a.size(); ++k) {
        const std::string at = "tightbinding.adjacency[" + std::to_string(k) + "]";
        if (!a[k].is_array() || a[k].size() != 2) fail(at, "expected [j, k]");
        const int i = integer(a[k][0], at), j = integer(a[k][1], at);
        if (i < 0 || j < 0 || i >= n || j >= n || i == j) fail(at, "invalid resonator pair");
        adj.emplace_back(std::min(i, j), std::max(i, j));
      }
      cfg.adjacency = adj;
    }
  }
  // Geometry errors (overlap, non-positive radius) surface as config errors.
  try {
    if (!cfg.dilute) (void)cfg.system();
  } catch (const InputError& e) {
    fail("geometry", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_schema() {
  return R"(reslab experiment config (JSON). Unknown keys are rejected.
{
  "geometry": {                                  exactly one of:
    "spheres": [{"center": [x, y, z], "radius": r}, ...],
    "dilute":  {"base_radius": 1.0, "centers": [[x, y, z], ...], "eta": 0.1}
  },
  "materials":  {"delta": 1e-3, "kappa_r": 1.0, "rho_r": 1.0},
  "modulation": {"omega": W, "epsilon": 0.0,
                 "resonators": [{"rho_inv": [[n, re, im], ...], "kappa_inv": [...]}, ...]},
  "numerics":   {"refinement": 2, "refinement_sweep": [0, 1, 2, 3], "tol": 1e-9,
                 "det_tol": 1e-8, "max_raw_asymmetry": 0.05, "grid": 2048,
                 "transform_tol": 1e-10, "epsilon_sweep": [0.01, 0.005, 0.0025],
                 "eta_sweep": [0.2, 0.1, 0.05], "capB": "bem" | "analytic"},
  "tightbinding": {"adjacency": [[j, k], ...]}
}
Fourier triples list the modes n != 0 of each shape; c_0 = 1 and missing
c_{-n} are filled by conjugation.
)";
}

}  // namespace reslab
