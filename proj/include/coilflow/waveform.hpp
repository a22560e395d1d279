#pragma once

#include <filesystem>
#include <vector>

namespace coilflow {

struct WaveformSample {
  double t;  // s
  double v;  // m/s, mean velocity over the inlet
};

enum class RampShape { linear, smoothstep };

/// Periodic mean inflow velocity v(t) plus the pre-run ramp that precedes t = 0.
struct InflowWaveform {
  std::vector<WaveformSample> samples;  // strictly increasing t
  double period = 1.0;                  // s
  int ramp_steps = 1500;
  double ramp_step_size = 0.0;          // s per ramp step (the run's dt)
  RampShape ramp_shape = RampShape::linear;

  [[nodiscard]] double ramp_duration() const { return ramp_steps * ramp_step_size; }
  /// Throws ConfigError for empty/unsorted samples or a non-positive period.
  void validate() const;
};

/// Periodic linear interpolation of the samples; for t < 0 the value at t = 0
/// scaled by the ramp factor in [0, 1).
double waveform_sample(const InflowWaveform& waveform, double t);

/// Reads a `t_seconds,v_m_per_s` CSV (>= 2 rows, strictly increasing t).
/// The period defaults to the last sample time.
InflowWaveform read_waveform_csv(const std::filesystem::path& path);
void write_waveform_csv(const InflowWaveform& waveform, const std::filesystem::path& path);

/// Two-harmonic heartbeat: base * (1 + sin(2 pi t / T) / 2 + sin(4 pi t / T) / 4).
/// Peak (1.65 base) at t = T / 6, minimum (0.35 base) at t = 5 T / 6.
InflowWaveform builtin_waveform(double base_velocity, double period, int samples = 120);

/// Time of the largest sample, i.e. peak systole of the tabulated waveform.
double waveform_peak_time(const InflowWaveform& waveform);

}  // namespace coilflow
