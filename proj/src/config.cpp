#include "qft/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qft/constants.hpp"
#include "qft/errors.hpp"

namespace qft {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string> kExperiments = {
    "dispersion", "phasematch", "propagate", "green",
    "schmidt",    "hom",        "analytic",  "sweep"};

void require_known_keys(const json& obj, const std::string& section,
                        const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    throw ConfigError("config section '" + section + "' must be an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in config section '" +
                        section + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key,
                  const std::string& section) {
  if (!obj.contains(key)) {
    throw ConfigError("missing required key '" + key + "' in section '" + section + "'");
  }
  if (!obj[key].is_number()) {
    throw ConfigError("key '" + key + "' in section '" + section + "' must be a number");
  }
  return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError("key '" + key + "' must be a number");
  }
  return obj[key].get<double>();
}

int get_int_or(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError("key '" + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

// Returns true when the value is the string "auto"; otherwise writes the
// numeric value and returns false.
bool auto_or_number(const json& obj, const std::string& key, double& value) {
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "auto") {
      throw ConfigError("key '" + key + "' must be a number or \"auto\"");
    }
    return true;
  }
  if (!v.is_number()) {
    throw ConfigError("key '" + key + "' must be a number or \"auto\"");
  }
  value = v.get<double>();
  return false;
}

void check_positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw ConfigError(what + " must be positive");
}

} // namespace

CaseConfig CaseConfig::from_json_string(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_known_keys(root, "root",
                     {"experiment", "fiber", "pumps", "signals", "mesh", "basis",
                      "solver", "probe", "sweep"});

  CaseConfig cfg;

  if (root.contains("experiment")) {
    if (!root["experiment"].is_string()) {
      throw ConfigError("'experiment' must be a string");
    }
    cfg.experiment = root["experiment"].get<std::string>();
    if (!kExperiments.count(cfg.experiment)) {
      throw ConfigError("unknown experiment kind '" + cfg.experiment + "'");
    }
  }

  if (!root.contains("fiber")) throw ConfigError("missing 'fiber' section");
  {
    const json& f = root["fiber"];
    require_known_keys(f, "fiber",
                       {"core_radius_um", "air_fill", "gamma_per_W_km", "length_m"});
    cfg.fiber.core_radius = get_number(f, "core_radius_um", "fiber") * 1e-6;
    cfg.fiber.air_fill = get_number(f, "air_fill", "fiber");
    cfg.fiber.gamma = get_number(f, "gamma_per_W_km", "fiber") * 1e-3;
    cfg.fiber.length = get_number(f, "length_m", "fiber");
    check_positive(cfg.fiber.core_radius, "fiber.core_radius_um");
    check_positive(cfg.fiber.length, "fiber.length_m");
    if (cfg.fiber.gamma < 0.0) throw ConfigError("fiber.gamma_per_W_km must be >= 0");
    if (cfg.fiber.air_fill < 0.0 || cfg.fiber.air_fill >= 1.0) {
      throw ConfigError("fiber.air_fill must be in [0, 1)");
    }
  }

  if (!root.contains("pumps")) throw ConfigError("missing 'pumps' section");
  {
    const json& p = root["pumps"];
    require_known_keys(p, "pumps",
                       {"wavelength_p_nm", "wavelength_q_nm", "fwhm_ps",
                        "peak_power_p_mW", "peak_power_q_mW", "delay_ps"});
    cfg.pump_p_wavelength = get_number(p, "wavelength_p_nm", "pumps") * 1e-9;
    cfg.pump_q_wavelength = get_number(p, "wavelength_q_nm", "pumps") * 1e-9;
    cfg.pump_fwhm = get_number(p, "fwhm_ps", "pumps") * 1e-12;
    cfg.power_p = get_number(p, "peak_power_p_mW", "pumps") * 1e-3;
    cfg.power_q = get_number(p, "peak_power_q_mW", "pumps") * 1e-3;
    cfg.pump_delay = get_number_or(p, "delay_ps", 0.0) * 1e-12;
    check_positive(cfg.pump_p_wavelength, "pumps.wavelength_p_nm");
    check_positive(cfg.pump_q_wavelength, "pumps.wavelength_q_nm");
    check_positive(cfg.pump_fwhm, "pumps.fwhm_ps");
    if (cfg.power_p < 0.0 || cfg.power_q < 0.0) {
      throw ConfigError("pump peak powers must be >= 0");
    }
  }

  // absent section means both carriers are derived from the default seed
  if (root.contains("signals")) {
    const json& s = root["signals"];
    require_known_keys(s, "signals",
                       {"wavelength_g_nm", "wavelength_b_nm", "seed_g_nm"});
    cfg.seed_g = get_number_or(s, "seed_g_nm", 673.0) * 1e-9;
    double g_nm = 0.0, b_nm = 0.0;
    cfg.auto_g = !s.contains("wavelength_g_nm") || auto_or_number(s, "wavelength_g_nm", g_nm);
    cfg.auto_b = !s.contains("wavelength_b_nm") || auto_or_number(s, "wavelength_b_nm", b_nm);
    if (!cfg.auto_g) {
      cfg.wavelength_g = g_nm * 1e-9;
      check_positive(cfg.wavelength_g, "signals.wavelength_g_nm");
    }
    if (!cfg.auto_b) {
      cfg.wavelength_b = b_nm * 1e-9;
      check_positive(cfg.wavelength_b, "signals.wavelength_b_nm");
    }
    if (cfg.auto_g && !cfg.auto_b) {
      throw ConfigError(
          "signals.wavelength_b_nm cannot be fixed while wavelength_g_nm is \"auto\"");
    }
    if (!cfg.auto_g && !cfg.auto_b) {
      // All four carriers fixed: enforce energy conservation.
      const double c = kSpeedOfLight;
      const double wb_required = 2.0 * kPi * c *
          (1.0 / cfg.pump_p_wavelength + 1.0 / cfg.wavelength_g -
           1.0 / cfg.pump_q_wavelength);
      const double wb_given = 2.0 * kPi * c / cfg.wavelength_b;
      if (std::abs(wb_given - wb_required) > 1e-6 * wb_given) {
        throw ConfigError(
            "signal carriers violate energy conservation; set wavelength_b_nm "
            "to \"auto\" to derive it");
      }
    }
  }

  if (root.contains("mesh")) {
    const json& m = root["mesh"];
    require_known_keys(m, "mesh", {"n_points", "window_ps"});
    cfg.n_points = get_int_or(m, "n_points", cfg.n_points);
    if (cfg.n_points < 256 || (cfg.n_points & (cfg.n_points - 1)) != 0) {
      throw ConfigError("mesh.n_points must be a power of two >= 256");
    }
    if (m.contains("window_ps")) {
      double w = 0.0;
      cfg.auto_window = auto_or_number(m, "window_ps", w);
      if (!cfg.auto_window) {
        cfg.window = w * 1e-12;
        check_positive(cfg.window, "mesh.window_ps");
      }
    }
  }

  if (root.contains("basis")) {
    const json& b = root["basis"];
    require_known_keys(b, "basis",
                       {"n_modes", "t_char_ps", "center_ps", "initial_t_char_ps"});
    cfg.n_modes = get_int_or(b, "n_modes", cfg.n_modes);
    if (cfg.n_modes < 1 || cfg.n_modes > 128) {
      throw ConfigError("basis.n_modes must be in 1..128");
    }
    if (b.contains("t_char_ps")) {
      double t = 0.0;
      cfg.auto_t_char = auto_or_number(b, "t_char_ps", t);
      if (!cfg.auto_t_char) {
        cfg.t_char = t * 1e-12;
        check_positive(cfg.t_char, "basis.t_char_ps");
      }
    }
    cfg.initial_t_char = get_number_or(b, "initial_t_char_ps", 40.0) * 1e-12;
    check_positive(cfg.initial_t_char, "basis.initial_t_char_ps");
    cfg.basis_center = get_number_or(b, "center_ps", 0.0) * 1e-12;
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    require_known_keys(s, "solver", {"n_steps", "store_every", "dispersion_order"});
    cfg.solver.n_steps = get_int_or(s, "n_steps", cfg.solver.n_steps);
    cfg.solver.store_every = get_int_or(s, "store_every", cfg.solver.store_every);
    cfg.solver.dispersion_order = get_int_or(s, "dispersion_order",
                                             cfg.solver.dispersion_order);
    if (cfg.solver.n_steps < 10 || cfg.solver.n_steps > 100000) {
      throw ConfigError("solver.n_steps must be in 10..100000");
    }
    if (cfg.solver.store_every < 1) throw ConfigError("solver.store_every must be >= 1");
    if (cfg.solver.dispersion_order < 1 || cfg.solver.dispersion_order > 4) {
      throw ConfigError("solver.dispersion_order must be in 1..4");
    }
  }

  if (root.contains("probe")) {
    const json& p = root["probe"];
    require_known_keys(p, "probe", {"fwhm_ps"});
    cfg.probe_fwhm = get_number(p, "fwhm_ps", "probe") * 1e-12;
    check_positive(cfg.probe_fwhm, "probe.fwhm_ps");
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    require_known_keys(s, "sweep", {"quantity", "fwhm_min_ps", "fwhm_max_ps", "n_points"});
    if (!s.contains("quantity") || !s["quantity"].is_string()) {
      throw ConfigError("sweep.quantity must be a string");
    }
    cfg.sweep.quantity = s["quantity"].get<std::string>();
    if (cfg.sweep.quantity != "max_efficiency" && cfg.sweep.quantity != "min_p11") {
      throw ConfigError("sweep.quantity must be 'max_efficiency' or 'min_p11'");
    }
    cfg.sweep.fwhm_min = get_number(s, "fwhm_min_ps", "sweep") * 1e-12;
    cfg.sweep.fwhm_max = get_number(s, "fwhm_max_ps", "sweep") * 1e-12;
    cfg.sweep.n_points = get_int_or(s, "n_points", 25);
    check_positive(cfg.sweep.fwhm_min, "sweep.fwhm_min_ps");
    if (!(cfg.sweep.fwhm_max > cfg.sweep.fwhm_min)) {
      throw ConfigError("sweep.fwhm_max_ps must exceed sweep.fwhm_min_ps");
    }
    if (cfg.sweep.n_points < 2 || cfg.sweep.n_points > 1000) {
      throw ConfigError("sweep.n_points must be in 2..1000");
    }
    cfg.has_sweep = true;
  }

  return cfg;
}

CaseConfig CaseConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

namespace {

// Echoing a config multiplies SI values back to display units, and that
// multiply need not invert the parse divide bit for bit. Rounding to twelve
// significant digits (far past any physical meaning here) absorbs the
// conversion noise and makes canonicalization idempotent.
double display(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  const double mag =
      std::pow(10.0, 11 - std::floor(std::log10(std::fabs(value))));
  return std::round(value * mag) / mag;
}

} // namespace

std::string CaseConfig::canonical_json() const {
  ordered_json j;
  if (!experiment.empty()) j["experiment"] = experiment;
  j["fiber"] = {{"core_radius_um", display(fiber.core_radius * 1e6)},
                {"air_fill", display(fiber.air_fill)},
                {"gamma_per_W_km", display(fiber.gamma * 1e3)},
                {"length_m", display(fiber.length)}};
  j["pumps"] = {{"wavelength_p_nm", display(pump_p_wavelength * 1e9)},
                {"wavelength_q_nm", display(pump_q_wavelength * 1e9)},
                {"fwhm_ps", display(pump_fwhm * 1e12)},
                {"peak_power_p_mW", display(power_p * 1e3)},
                {"peak_power_q_mW", display(power_q * 1e3)},
                {"delay_ps", display(pump_delay * 1e12)}};
  ordered_json signals;
  signals["wavelength_g_nm"] = auto_g ? ordered_json("auto")
                                      : ordered_json(display(wavelength_g * 1e9));
  signals["wavelength_b_nm"] = auto_b ? ordered_json("auto")
                                      : ordered_json(display(wavelength_b * 1e9));
  signals["seed_g_nm"] = display(seed_g * 1e9);
  j["signals"] = signals;
  ordered_json mesh;
  mesh["n_points"] = n_points;
  mesh["window_ps"] =
      auto_window ? ordered_json("auto") : ordered_json(display(window * 1e12));
  j["mesh"] = mesh;
  ordered_json basis;
  basis["n_modes"] = n_modes;
  basis["t_char_ps"] =
      auto_t_char ? ordered_json("auto") : ordered_json(display(t_char * 1e12));
  basis["initial_t_char_ps"] = display(initial_t_char * 1e12);
  basis["center_ps"] = display(basis_center * 1e12);
  j["basis"] = basis;
  j["solver"] = {{"n_steps", solver.n_steps},
                 {"store_every", solver.store_every},
                 {"dispersion_order", solver.dispersion_order}};
  if (probe_fwhm > 0.0) j["probe"] = {{"fwhm_ps", display(probe_fwhm * 1e12)}};
  if (has_sweep) {
    j["sweep"] = {{"quantity", sweep.quantity},
                  {"fwhm_min_ps", display(sweep.fwhm_min * 1e12)},
                  {"fwhm_max_ps", display(sweep.fwhm_max * 1e12)},
                  {"n_points", sweep.n_points}};
  }
  return j.dump();
}

ResolvedCase resolve_case(const CaseConfig& config) {
  DispersionProfile profile(config.fiber, 560e-9, 1750e-9);

  const double omega_p = 2.0 * kPi * kSpeedOfLight / config.pump_p_wavelength;
  const double omega_q = 2.0 * kPi * kSpeedOfLight / config.pump_q_wavelength;
  CarrierSet carriers;
  if (config.auto_g) {
    carriers = tune_signal_carriers(profile, omega_p, omega_q,
                                    2.0 * kPi * kSpeedOfLight / config.seed_g);
  } else {
    carriers.omega_p = omega_p;
    carriers.omega_q = omega_q;
    carriers.omega_g = 2.0 * kPi * kSpeedOfLight / config.wavelength_g;
    carriers.omega_b = config.auto_b
                           ? carriers.omega_p + carriers.omega_g - carriers.omega_q
                           : 2.0 * kPi * kSpeedOfLight / config.wavelength_b;
  }

  InteractionSetup setup =
      make_setup(config.fiber, profile, carriers, config.power_p, config.power_q,
                 config.solver.dispersion_order);

  double window = config.window;
  if (config.auto_window) {
    double t_ref = config.auto_t_char ? config.initial_t_char : config.t_char;
    if (config.probe_fwhm > 0.0) t_ref = std::max(t_ref, config.probe_fwhm);
    if (config.has_sweep) t_ref = std::max(t_ref, config.sweep.fwhm_max);
    window = 8.0 * std::max(config.pump_fwhm, 4.0 * t_ref);
  }
  TemporalMesh mesh = TemporalMesh::create(config.n_points, window);

  return ResolvedCase{config, std::move(profile), carriers, std::move(setup),
                      std::move(mesh)};
}

} // namespace qft
