#include "coilflow/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "coilflow/errors.hpp"

namespace coilflow {

void InflowWaveform::validate() const {
  if (samples.empty()) throw ConfigError("inflow waveform has no samples");
  if (!(period > 0.0)) throw ConfigError("inflow waveform period must be positive");
  if (ramp_steps < 0) throw ConfigError("ramp_steps must be non-negative");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw ConfigError("inflow waveform times must be strictly increasing");
    }
  }
  if (samples.front().t < 0.0 || samples.back().t > period) {
    throw ConfigError("inflow waveform samples must lie within [0, period]");
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.v)) throw ConfigError("inflow waveform contains a non-finite velocity");
  }
}

namespace {

double periodic_value(const InflowWaveform& w, double t) {
  const auto& s = w.samples;
  if (s.size() == 1) return s.front().v;
  double tau = std::fmod(t, w.period);
  if (tau < 0.0) tau += w.period;
  auto upper = std::upper_bound(s.begin(), s.end(), tau,
                                [](double value, const WaveformSample& x) { return value < x.t; });
  WaveformSample lo, hi;
  if (upper == s.begin()) {
    lo = {s.back().t - w.period, s.back().v};
    hi = s.front();
  } else if (upper == s.end()) {
    lo = s.back();
    hi = {s.front().t + w.period, s.front().v};
  } else {
    lo = *(upper - 1);
    hi = *upper;
  }
  if (hi.t == lo.t) return hi.v;
  const double theta = (tau - lo.t) / (hi.t - lo.t);
  return lo.v + theta * (hi.v - lo.v);
}

}  // namespace

double waveform_sample(const InflowWaveform& waveform, double t) {
  if (waveform.samples.empty()) throw ConfigError("inflow waveform has no samples");
  if (t >= 0.0) return periodic_value(waveform, t);
  const double duration = waveform.ramp_duration();
  if (duration <= 0.0) return 0.0;
  const double s = std::clamp((t + duration) / duration, 0.0, 1.0);
  const double factor = waveform.ramp_shape == RampShape::linear ? s : s * s * (3.0 - 2.0 * s);
  return factor * periodic_value(waveform, 0.0);
}

InflowWaveform read_waveform_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open waveform file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("waveform file is empty: " + path.string());
  if (line.rfind("t_seconds,v_m_per_s", 0) != 0) {
    throw ConfigError("waveform file must start with header t_seconds,v_m_per_s: " +
                      path.string());
  }
  InflowWaveform w;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw ConfigError("malformed waveform row '" + line + "' in " + path.string());
    }
    try {
      w.samples.push_back({std::stod(a), std::stod(b)});
    } catch (const std::exception&) {
      throw ConfigError("malformed waveform row '" + line + "' in " + path.string());
    }
  }
  if (w.samples.size() < 2) throw ConfigError("waveform needs at least two rows: " + path.string());
  w.period = w.samples.back().t;
  w.validate();
  return w;
}

void write_waveform_csv(const InflowWaveform& waveform, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write waveform file: " + path.string());
  out << "t_seconds,v_m_per_s\n";
  out.precision(17);
  for (const auto& s : waveform.samples) out << s.t << ',' << s.v << '\n';
  if (!out) throw IoError("failed writing waveform file: " + path.string());
}

InflowWaveform builtin_waveform(double base_velocity, double period, int samples) {
  InflowWaveform w;
  w.period = period;
  for (int i = 0; i <= samples; ++i) {
    const double t = period * i / samples;
    const double theta = 2.0 * std::numbers::pi * i / samples;
    const double v = base_velocity * (1.0 + 0.5 * std::sin(theta) + 0.25 * std::sin(2.0 * theta));
    w.samples.push_back({t, v});
  }
  return w;
}

double waveform_peak_time(const InflowWaveform& waveform) {
  auto it = std::max_element(waveform.samples.begin(), waveform.samples.end(),
                             [](const auto& a, const auto& b) { return a.v < b.v; });
  return it == waveform.samples.end() ? 0.0 : it->t;
}

}  // namespace coilflow
