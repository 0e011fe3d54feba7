#pragma once
// Run configuration: a JSON document with a declared schema version that
// selects the domain, the parameters (alpha, p, N), mesh/solver settings, and
// per-command options.  Parsing is strict — unknown keys are rejected — and
// parse(emit(config)) == config for every valid configuration.

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../../vendor/json.hpp"
#include "hardygap/params.hpp"
#include "hardygap/version.hpp"

namespace hardygap {

using ordered_json = nlohmann::ordered_json;

/// Raised for malformed configurations; the CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config sections.
// ---------------------------------------------------------------------------

struct MeshConfig {
  int elements = 2048;
  std::string grading = "auto";  ///< "auto" | "geometric" | "log"
  double ratio = 0.0;            ///< cap on the element growth ratio; 0 = none
  std::vector<double> t_min;     ///< explicit inner-cutoff sweep (optional)
  std::vector<double> r_max;     ///< explicit outer-cutoff sweep (exterior)
  int levels = 6;                ///< sweep length when cutoffs are derived
  double depth0 = 6.0;           ///< first logarithmic truncation depth
  double depth_step = 2.0;       ///< depth increment per sweep level

  friend bool operator==(const MeshConfig&, const MeshConfig&) = default;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 500;
  double eig_tol = 1e-12;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct IndicialConfig {
  std::string location = "boundary";  ///< "boundary" | "infinity"
  std::vector<double> mu;             ///< explicit mu values
  int grid_count = 0;                 ///< plus a uniform grid over [0, c]

  friend bool operator==(const IndicialConfig&, const IndicialConfig&) = default;
};

struct HardyConfig {
  int refine_levels = 3;     ///< mesh-refinement study depth (0 disables)
  int refine_elements = 256; ///< base element count for the study
  bool decay_fit = true;     ///< fit the minimizer's boundary decay exponent

  friend bool operator==(const HardyConfig&, const HardyConfig&) = default;
};

struct CollarConfig {
  std::vector<double> widths;  ///< boundary-collar widths (empty = derived)
  double tail_cut = 0.0;       ///< exterior tail core radius (0 = derived)

  friend bool operator==(const CollarConfig&, const CollarConfig&) = default;
};

struct VerifyConfig {
  std::vector<std::string> suites;  ///< empty = all suites
  long samples = 100000;            ///< tuples for the sampling suites
  unsigned long seed = 12345;

  friend bool operator==(const VerifyConfig&, const VerifyConfig&) = default;
};

struct SweepConfig {
  std::vector<double> alpha;
  std::vector<double> p;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  DomainSpec domain = make_ball(1.0);
  Params params{0.0, 2.0, 3};
  MeshConfig mesh;
  SolverConfig solver;
  IndicialConfig indicial;
  HardyConfig hardy;
  CollarConfig collar;
  VerifyConfig verify;
  SweepConfig sweep;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// ---------------------------------------------------------------------------
// Parsing (strict: unknown keys rejected, types checked).
// ---------------------------------------------------------------------------

namespace detail {

inline void require_keys(const ordered_json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      throw ConfigError("config: unknown key '" + item.key() + "' in '" +
                        where + "'");
  }
}

template <typename T>
T get_as(const ordered_json& j, const std::string& where, const char* key,
         const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const ordered_json::exception&) {
    throw ConfigError("config: key '" + std::string(key) + "' in '" + where +
                      "' has the wrong type");
  }
}

/// Numeric axis: either an explicit list or {"min":a,"max":b,"count":n}.
inline std::vector<double> parse_axis(const ordered_json& j,
                                      const std::string& where) {
  std::vector<double> vals;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number())
        throw ConfigError("config: axis '" + where + "' holds a non-number");
      vals.push_back(v.get<double>());
    }
    return vals;
  }
  require_keys(j, where, {"min", "max", "count"});
  const double lo = get_as<double>(j, where, "min", 0.0);
  const double hi = get_as<double>(j, where, "max", 0.0);
  const int n = get_as<int>(j, where, "count", 0);
  if (n < 1) throw ConfigError("config: axis '" + where + "' needs count >= 1");
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i)
    vals.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return vals;
}

inline DomainSpec parse_domain(const ordered_json& j) {
  const std::string kind = get_as<std::string>(j, "domain", "kind", "");
  try {
    if (kind == "interval") {
      require_keys(j, "domain", {"kind", "length", "half_line"});
      return make_interval(get_as<double>(j, "domain", "length", 1.0),
                           get_as<bool>(j, "domain", "half_line", true));
    }
    if (kind == "ball") {
      require_keys(j, "domain", {"kind", "radius"});
      return make_ball(get_as<double>(j, "domain", "radius", 1.0));
    }
    if (kind == "annulus") {
      require_keys(j, "domain", {"kind", "r0", "r1"});
      return make_annulus(get_as<double>(j, "domain", "r0", 1.0),
                          get_as<double>(j, "domain", "r1", 2.0));
    }
    if (kind == "exterior-ball") {
      require_keys(j, "domain", {"kind", "radius"});
      return make_exterior_ball(get_as<double>(j, "domain", "radius", 1.0));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: invalid domain: ") + e.what());
  }
  throw ConfigError(
      "config: domain.kind must be one of interval | ball | annulus | "
      "exterior-ball");
}

}  // namespace detail

inline RunConfig parse_config(const ordered_json& j) {
  detail::require_keys(j, "<root>",
                       {"schema_version", "domain", "alpha", "p", "dim", "mesh",
                        "solver", "indicial", "hardy", "collar", "verify",
                        "sweep"});
  RunConfig cfg;
  cfg.schema_version =
      detail::get_as<int>(j, "<root>", "schema_version", kSchemaVersion);
  if (cfg.schema_version != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(cfg.schema_version));
  if (!j.contains("domain")) throw ConfigError("config: missing 'domain'");
  cfg.domain = detail::parse_domain(j.at("domain"));
  cfg.params.alpha = detail::get_as<double>(j, "<root>", "alpha", 0.0);
  cfg.params.p = detail::get_as<double>(j, "<root>", "p", 2.0);
  cfg.params.dim = detail::get_as<int>(j, "<root>", "dim", 3);
  try {
    validate(cfg.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: invalid parameters: ") + e.what());
  }
  if (j.contains("mesh")) {
    const auto& m = j.at("mesh");
    detail::require_keys(m, "mesh",
                         {"elements", "grading", "ratio", "t_min", "r_max",
                          "levels", "depth0", "depth_step"});
    cfg.mesh.elements = detail::get_as<int>(m, "mesh", "elements", 2048);
    cfg.mesh.grading = detail::get_as<std::string>(m, "mesh", "grading", "auto");
    cfg.mesh.ratio = detail::get_as<double>(m, "mesh", "ratio", 0.0);
    cfg.mesh.t_min =
        detail::get_as<std::vector<double>>(m, "mesh", "t_min", {});
    cfg.mesh.r_max =
        detail::get_as<std::vector<double>>(m, "mesh", "r_max", {});
    cfg.mesh.levels = detail::get_as<int>(m, "mesh", "levels", 6);
    cfg.mesh.depth0 = detail::get_as<double>(m, "mesh", "depth0", 6.0);
    cfg.mesh.depth_step = detail::get_as<double>(m, "mesh", "depth_step", 2.0);
    if (cfg.mesh.elements < 8)
      throw ConfigError("config: mesh.elements must be >= 8");
    if (cfg.mesh.grading != "auto" && cfg.mesh.grading != "geometric" &&
        cfg.mesh.grading != "log")
      throw ConfigError("config: mesh.grading must be auto | geometric | log");
    if (cfg.mesh.ratio != 0.0 && !(cfg.mesh.ratio > 1.0))
      throw ConfigError("config: mesh.ratio must exceed 1");
    for (double t : cfg.mesh.t_min)
      if (!(t > 0.0)) throw ConfigError("config: mesh.t_min entries must be > 0");
    for (double r : cfg.mesh.r_max)
      if (!(r > 0.0)) throw ConfigError("config: mesh.r_max entries must be > 0");
    if (!cfg.mesh.r_max.empty() && cfg.mesh.r_max.size() != cfg.mesh.t_min.size())
      throw ConfigError("config: mesh.r_max must pair with mesh.t_min");
    if (cfg.mesh.levels < 2)
      throw ConfigError("config: mesh.levels must be >= 2");
    if (!(cfg.mesh.depth0 > 1.0) || !(cfg.mesh.depth_step > 0.0))
      throw ConfigError("config: mesh depths must satisfy depth0 > 1, step > 0");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::require_keys(s, "solver", {"tol", "max_iter", "eig_tol"});
    cfg.solver.tol = detail::get_as<double>(s, "solver", "tol", 1e-10);
    cfg.solver.max_iter = detail::get_as<int>(s, "solver", "max_iter", 500);
    cfg.solver.eig_tol = detail::get_as<double>(s, "solver", "eig_tol", 1e-12);
    if (!(cfg.solver.tol > 0.0) || cfg.solver.max_iter < 1 ||
        !(cfg.solver.eig_tol > 0.0))
      throw ConfigError("config: solver settings must be positive");
  }

  if (j.contains("indicial")) {
    const auto& s = j.at("indicial");
    detail::require_keys(s, "indicial", {"location", "mu", "grid_count"});
    cfg.indicial.location =
        detail::get_as<std::string>(s, "indicial", "location", "boundary");
    if (cfg.indicial.location != "boundary" &&
        cfg.indicial.location != "infinity")
      throw ConfigError("config: indicial.location must be boundary | infinity");
    cfg.indicial.mu =
        detail::get_as<std::vector<double>>(s, "indicial", "mu", {});
    cfg.indicial.grid_count =
        detail::get_as<int>(s, "indicial", "grid_count", 0);
    if (cfg.indicial.grid_count < 0)
      throw ConfigError("config: indicial.grid_count must be >= 0");
  }

  if (j.contains("hardy")) {
    const auto& s = j.at("hardy");
    detail::require_keys(s, "hardy",
                         {"refine_levels", "refine_elements", "decay_fit"});
    cfg.hardy.refine_levels =
        detail::get_as<int>(s, "hardy", "refine_levels", 3);
    cfg.hardy.refine_elements =
        detail::get_as<int>(s, "hardy", "refine_elements", 256);
    cfg.hardy.decay_fit = detail::get_as<bool>(s, "hardy", "decay_fit", true);
    if (cfg.hardy.refine_levels < 0 || cfg.hardy.refine_elements < 8)
      throw ConfigError("config: hardy refinement settings out of range");
  }

  if (j.contains("collar")) {
    const auto& s = j.at("collar");
    detail::require_keys(s, "collar", {"widths", "tail_cut"});
    cfg.collar.widths =
        detail::get_as<std::vector<double>>(s, "collar", "widths", {});
    cfg.collar.tail_cut = detail::get_as<double>(s, "collar", "tail_cut", 0.0);
    for (double w : cfg.collar.widths)
      if (!(w > 0.0)) throw ConfigError("config: collar.widths must be > 0");
    if (cfg.collar.tail_cut < 0.0)
      throw ConfigError("config: collar.tail_cut must be >= 0");
  }

  if (j.contains("verify")) {
    const auto& s = j.at("verify");
    detail::require_keys(s, "verify", {"suites", "samples", "seed"});
    cfg.verify.suites =
        detail::get_as<std::vector<std::string>>(s, "verify", "suites", {});
    cfg.verify.samples = detail::get_as<long>(s, "verify", "samples", 100000);
    cfg.verify.seed =
        detail::get_as<unsigned long>(s, "verify", "seed", 12345);
    if (cfg.verify.samples < 1)
      throw ConfigError("config: verify.samples must be >= 1");
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::require_keys(s, "sweep", {"alpha", "p"});
    if (s.contains("alpha"))
      cfg.sweep.alpha = detail::parse_axis(s.at("alpha"), "sweep.alpha");
    if (s.contains("p")) cfg.sweep.p = detail::parse_axis(s.at("p"), "sweep.p");
    for (double pv : cfg.sweep.p)
      if (!(pv > 1.0))
        throw ConfigError("config: sweep.p values must exceed 1");
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Emission (deterministic key order; parse(emit(cfg)) == cfg).
// ---------------------------------------------------------------------------

inline ordered_json emit_config(const RunConfig& cfg) {
  ordered_json j;
  j["schema_version"] = cfg.schema_version;
  ordered_json d;
  switch (cfg.domain.kind) {
    case DomainKind::Interval:
      d["kind"] = "interval";
      d["length"] = cfg.domain.r1;
      d["half_line"] = cfg.domain.half_line;
      break;
    case DomainKind::Ball:
      d["kind"] = "ball";
      d["radius"] = cfg.domain.r1;
      break;
    case DomainKind::Annulus:
      d["kind"] = "annulus";
      d["r0"] = cfg.domain.r0;
      d["r1"] = cfg.domain.r1;
      break;
    case DomainKind::ExteriorBall:
      d["kind"] = "exterior-ball";
      d["radius"] = cfg.domain.r0;
      break;
  }
  j["domain"] = d;
  j["alpha"] = cfg.params.alpha;
  j["p"] = cfg.params.p;
  j["dim"] = cfg.params.dim;
  j["mesh"] = {{"elements", cfg.mesh.elements},
               {"grading", cfg.mesh.grading},
               {"ratio", cfg.mesh.ratio},
               {"t_min", cfg.mesh.t_min},
               {"r_max", cfg.mesh.r_max},
               {"levels", cfg.mesh.levels},
               {"depth0", cfg.mesh.depth0},
               {"depth_step", cfg.mesh.depth_step}};
  j["solver"] = {{"tol", cfg.solver.tol},
                 {"max_iter", cfg.solver.max_iter},
                 {"eig_tol", cfg.solver.eig_tol}};
  j["indicial"] = {{"location", cfg.indicial.location},
                   {"mu", cfg.indicial.mu},
                   {"grid_count", cfg.indicial.grid_count}};
  j["hardy"] = {{"refine_levels", cfg.hardy.refine_levels},
                {"refine_elements", cfg.hardy.refine_elements},
                {"decay_fit", cfg.hardy.decay_fit}};
  j["collar"] = {{"widths", cfg.collar.widths},
                 {"tail_cut", cfg.collar.tail_cut}};
  j["verify"] = {{"suites", cfg.verify.suites},
                 {"samples", cfg.verify.samples},
                 {"seed", cfg.verify.seed}};
  j["sweep"] = {{"alpha", cfg.sweep.alpha}, {"p", cfg.sweep.p}};
  return j;
}

}  // namespace hardygap
