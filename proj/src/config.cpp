#include "coilflow/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "coilflow/errors.hpp"

namespace coilflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::string t = s;
  for (char& ch : t) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v, std::size_t n) {
  const auto words = split_words(v);
  if (words.size() != n) {
    throw ConfigError("config key '" + key + "' expects " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& w : words) out.push_back(to_double(key, w));
  return out;
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto d = to_doubles(key, v, 3);
  return {d[0], d[1], d[2]};
}

std::filesystem::path to_path(const std::string& v, const std::filesystem::path& base) {
  std::filesystem::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

using Setter = std::function<void(SimConfig&, const std::string& key, const std::string& value,
                                  const std::filesystem::path& base)>;

const std::map<std::string, Setter>& setters() {
  using P = std::filesystem::path;
  static const std::map<std::string, Setter> table = {
      {"mask", [](SimConfig& c, auto&, auto& v, const P& b) { c.mask = to_path(v, b); }},
      {"coil", [](SimConfig& c, auto&, auto& v, const P& b) { c.coil = to_path(v, b); }},
      {"mode",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         if (v == "volume_averaged") c.mode = CoilMode::volume_averaged;
         else if (v == "fully_resolved") c.mode = CoilMode::fully_resolved;
         else throw ConfigError("config key '" + k + "': expected volume_averaged or fully_resolved");
       }},
      {"wire_diameter", [](SimConfig& c, auto& k, auto& v, const P&) { c.wire_diameter = to_double(k, v); }},
      {"porosity_window", [](SimConfig& c, auto& k, auto& v, const P&) { c.porosity_window = to_double(k, v); }},
      {"region_mask", [](SimConfig& c, auto&, auto& v, const P& b) { c.region_mask = to_path(v, b); }},
      {"region_sphere",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         const auto d = to_doubles(k, v, 4);
         c.region_center = Vec3(d[0], d[1], d[2]);
         c.region_radius = d[3];
       }},
      {"inlet_radius", [](SimConfig& c, auto& k, auto& v, const P&) { c.inlet_radius = to_double(k, v); }},
      {"periodic",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         c.periodic = {false, false, false};
         for (const auto& w : split_words(v)) {
           if (w == "x") c.periodic[0] = true;
           else if (w == "y") c.periodic[1] = true;
           else if (w == "z") c.periodic[2] = true;
           else if (w != "none") throw ConfigError("config key '" + k + "': axes must be x, y, z or none");
         }
       }},
      {"dx", [](SimConfig& c, auto& k, auto& v, const P&) { c.scales.dx = to_double(k, v); }},
      {"dt", [](SimConfig& c, auto& k, auto& v, const P&) { c.scales.dt = to_double(k, v); }},
      {"rho0", [](SimConfig& c, auto& k, auto& v, const P&) { c.scales.rho0 = to_double(k, v); }},
      {"viscosity_model",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         if (v == "newtonian") c.viscosity_model = ViscosityModel::newtonian;
         else if (v == "carreau_yasuda") c.viscosity_model = ViscosityModel::carreau_yasuda;
         else throw ConfigError("config key '" + k + "': expected newtonian or carreau_yasuda");
       }},
      {"mu0", [](SimConfig& c, auto& k, auto& v, const P&) { c.rheology.mu0 = to_double(k, v); }},
      {"mu_inf", [](SimConfig& c, auto& k, auto& v, const P&) { c.rheology.mu_inf = to_double(k, v); }},
      {"lambda", [](SimConfig& c, auto& k, auto& v, const P&) { c.rheology.lambda = to_double(k, v); }},
      {"n", [](SimConfig& c, auto& k, auto& v, const P&) { c.rheology.n = to_double(k, v); }},
      {"a", [](SimConfig& c, auto& k, auto& v, const P&) { c.rheology.a = to_double(k, v); }},
      {"omega_min", [](SimConfig& c, auto& k, auto& v, const P&) { c.omega_bounds.min = to_double(k, v); }},
      {"omega_max", [](SimConfig& c, auto& k, auto& v, const P&) { c.omega_bounds.max = to_double(k, v); }},
      {"d_p", [](SimConfig& c, auto& k, auto& v, const P&) { c.porous.d_p = to_double(k, v); }},
      {"phi_min", [](SimConfig& c, auto& k, auto& v, const P&) { c.porous.phi_min = to_double(k, v); }},
      {"phi_pure_threshold",
       [](SimConfig& c, auto& k, auto& v, const P&) { c.porous.phi_pure_fluid_threshold = to_double(k, v); }},
      {"anisotropic", [](SimConfig& c, auto& k, auto& v, const P&) { c.anisotropic = to_bool(k, v); }},
      {"permeability_shape",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         const auto d = to_doubles(k, v, 6);  // xx yy zz xy xz yz
         c.permeability_shape << d[0], d[3], d[4], d[3], d[1], d[5], d[4], d[5], d[2];
       }},
      {"waveform",
       [](SimConfig& c, auto&, auto& v, const P& b) {
         c.waveform_source = v == "builtin" ? v : to_path(v, b).string();
       }},
      {"waveform_base_velocity",
       [](SimConfig& c, auto& k, auto& v, const P&) { c.waveform_base_velocity = to_double(k, v); }},
      {"waveform_period", [](SimConfig& c, auto& k, auto& v, const P&) { c.waveform_period = to_double(k, v); }},
      {"ramp_steps", [](SimConfig& c, auto& k, auto& v, const P&) { c.ramp_steps = static_cast<int>(to_long(k, v)); }},
      {"ramp_shape",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         if (v == "linear") c.ramp_shape = RampShape::linear;
         else if (v == "smoothstep") c.ramp_shape = RampShape::smoothstep;
         else throw ConfigError("config key '" + k + "': expected linear or smoothstep");
       }},
      {"heartbeats", [](SimConfig& c, auto& k, auto& v, const P&) { c.heartbeats = static_cast<int>(to_long(k, v)); }},
      {"final_time", [](SimConfig& c, auto& k, auto& v, const P&) { c.final_time = to_double(k, v); }},
      {"max_steps", [](SimConfig& c, auto& k, auto& v, const P&) { c.max_steps = to_long(k, v); }},
      {"output_every", [](SimConfig& c, auto& k, auto& v, const P&) { c.output_every = to_long(k, v); }},
      {"checkpoint_every", [](SimConfig& c, auto& k, auto& v, const P&) { c.checkpoint_every = to_long(k, v); }},
      {"field_every", [](SimConfig& c, auto& k, auto& v, const P&) { c.field_every = to_long(k, v); }},
      {"body_acceleration", [](SimConfig& c, auto& k, auto& v, const P&) { c.body_acceleration = to_vec3(k, v); }},
      {"outlet_scheme",
       [](SimConfig& c, auto& k, auto& v, const P&) {
         if (v == "linear") c.outlet.scheme = OutletScheme::linear;
         else if (v == "zero_gradient") c.outlet.scheme = OutletScheme::zero_gradient;
         else if (v == "pressure") c.outlet.scheme = OutletScheme::pressure;
         else if (v == "convective") c.outlet.scheme = OutletScheme::convective;
         else throw ConfigError("config key '" + k + "': expected linear, zero_gradient, pressure or convective");
       }},
      {"outlet_pressure_relaxation",
       [](SimConfig& c, auto& k, auto& v, const P&) { c.outlet.pressure_relaxation = to_double(k, v); }},
      {"threads", [](SimConfig& c, auto& k, auto& v, const P&) { c.threads = static_cast<int>(to_long(k, v)); }},
      {"output_dir", [](SimConfig& c, auto&, auto& v, const P& b) { c.output_dir = to_path(v, b); }},
  };
  return table;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  SimConfig c;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("config key '" + key + "' has no value");
    it->second(c, key, value, base_dir);
  }
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  SimConfig c = parse_config(buf.str(), path.parent_path());
  c.finalize();
  return c;
}

void SimConfig::finalize() {
  if (waveform_source == "builtin") {
    if (!(waveform_period > 0.0)) throw ConfigError("waveform_period must be positive");
    waveform = builtin_waveform(waveform_base_velocity, waveform_period);
  } else {
    waveform = read_waveform_csv(waveform_source);
  }
  waveform.ramp_steps = ramp_steps;
  waveform.ramp_shape = ramp_shape;
  waveform.ramp_step_size = scales.dt;
  const double derived = heartbeats * waveform.period;
  if (std::abs(derived - final_time) > 1e-9 * std::max(1.0, final_time)) {
    spdlog::warn("final_time {} s differs from heartbeats x period = {} s; using the latter",
                 final_time, derived);
  }
  final_time = derived;
}

void SimConfig::validate() const {
  try {
    scales.validate();
    rheology.validate();
    porous.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  waveform.validate();
  if (!(wire_diameter > 0.0)) throw ConfigError("wire_diameter must be positive");
  if (porosity_window < 0.0) throw ConfigError("porosity_window must not be negative");
  if (inlet_radius < 0.0) throw ConfigError("inlet_radius must not be negative");
  if (region_center && !(region_radius > 0.0)) throw ConfigError("region_sphere radius must be positive");
  if (!(omega_bounds.min > 0.0 && omega_bounds.min < omega_bounds.max && omega_bounds.max < 2.0)) {
    throw ConfigError("omega bounds must satisfy 0 < omega_min < omega_max < 2");
  }
  if (heartbeats < 0) throw ConfigError("heartbeats must not be negative");
  if (max_steps < 0 || output_every < 0 || checkpoint_every < 0 || field_every < 0) {
    throw ConfigError("step counts and cadences must not be negative");
  }
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (!(outlet.pressure_relaxation >= 0.0 && outlet.pressure_relaxation <= 1.0)) {
    throw ConfigError("outlet_pressure_relaxation must lie in [0, 1]");
  }
  if (anisotropic && !is_spd(permeability_shape)) {
    throw ConfigError("permeability_shape is not symmetric positive definite");
  }
  if (!body_acceleration.allFinite()) throw ConfigError("body_acceleration must be finite");
}

long SimConfig::main_steps() const {
  return std::lround(heartbeats * waveform.period / scales.dt);
}

std::string format_config(const SimConfig& c) {
  std::ostringstream os;
  auto line = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  if (!c.mask.empty()) line("mask", c.mask.string());
  if (!c.coil.empty()) line("coil", c.coil.string());
  line("mode", c.mode == CoilMode::volume_averaged ? "volume_averaged" : "fully_resolved");
  line("wire_diameter", fmt_double(c.wire_diameter));
  line("porosity_window", fmt_double(c.porosity_window));
  if (!c.region_mask.empty()) line("region_mask", c.region_mask.string());
  if (c.region_center) {
    line("region_sphere", fmt_double(c.region_center->x()) + " " + fmt_double(c.region_center->y()) +
                              " " + fmt_double(c.region_center->z()) + " " + fmt_double(c.region_radius));
  }
  line("inlet_radius", fmt_double(c.inlet_radius));
  std::string axes;
  for (int a = 0; a < 3; ++a) {
    if (c.periodic[static_cast<std::size_t>(a)]) axes += std::string(axes.empty() ? "" : " ") + "xyz"[a];
  }
  line("periodic", axes.empty() ? "none" : axes);
  line("dx", fmt_double(c.scales.dx));
  line("dt", fmt_double(c.scales.dt));
  line("rho0", fmt_double(c.scales.rho0));
  line("viscosity_model", c.viscosity_model == ViscosityModel::newtonian ? "newtonian" : "carreau_yasuda");
  line("mu0", fmt_double(c.rheology.mu0));
  line("mu_inf", fmt_double(c.rheology.mu_inf));
  line("lambda", fmt_double(c.rheology.lambda));
  line("n", fmt_double(c.rheology.n));
  line("a", fmt_double(c.rheology.a));
  line("omega_min", fmt_double(c.omega_bounds.min));
  line("omega_max", fmt_double(c.omega_bounds.max));
  line("d_p", fmt_double(c.porous.d_p));
  line("phi_min", fmt_double(c.porous.phi_min));
  line("phi_pure_threshold", fmt_double(c.porous.phi_pure_fluid_threshold));
  line("anisotropic", c.anisotropic ? "true" : "false");
  const Mat3& k = c.permeability_shape;
  line("permeability_shape", fmt_double(k(0, 0)) + " " + fmt_double(k(1, 1)) + " " + fmt_double(k(2, 2)) +
                                 " " + fmt_double(k(0, 1)) + " " + fmt_double(k(0, 2)) + " " +
                                 fmt_double(k(1, 2)));
  line("waveform", c.waveform_source);
  line("waveform_base_velocity", fmt_double(c.waveform_base_velocity));
  line("waveform_period", fmt_double(c.waveform_period));
  line("ramp_steps", std::to_string(c.ramp_steps));
  line("ramp_shape", c.ramp_shape == RampShape::linear ? "linear" : "smoothstep");
  line("heartbeats", std::to_string(c.heartbeats));
  line("final_time", fmt_double(c.final_time));
  line("max_steps", std::to_string(c.max_steps));
  line("output_every", std::to_string(c.output_every));
  line("checkpoint_every", std::to_string(c.checkpoint_every));
  line("field_every", std::to_string(c.field_every));
  line("body_acceleration", fmt_double(c.body_acceleration.x()) + " " +
                                fmt_double(c.body_acceleration.y()) + " " +
                                fmt_double(c.body_acceleration.z()));
  line("outlet_scheme", c.outlet.scheme == OutletScheme::linear          ? "linear"
                       : c.outlet.scheme == OutletScheme::zero_gradient ? "zero_gradient"
                       : c.outlet.scheme == OutletScheme::convective    ? "convective"
                                                                        : "pressure");
  line("outlet_pressure_relaxation", fmt_double(c.outlet.pressure_relaxation));
  line("threads", std::to_string(c.threads));
  line("output_dir", c.output_dir.string());
  return os.str();
}

}  // namespace coilflow
