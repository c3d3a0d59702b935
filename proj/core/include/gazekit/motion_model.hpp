#pragma once

#include <algorithm>

namespace gazekit {

/// Amplitude-duration rule for saccades: 2.2 ms per degree plus 21 ms,
/// the usual main-sequence straight-line fit. Monotone in amplitude.
inline double saccade_duration_ms(double amplitude_deg) {
  return 2.2 * std::max(0.0, amplitude_deg) + 21.0;
}

/// Duration of a catch-up saccade launched latency_ms after a target
/// starts moving at speed_dps and landing on the target: the amplitude
/// grows while the saccade is in flight, so the duration solves
/// d = 2.2 * v * (latency + d) + 21 with v in deg/ms.
inline double catch_up_saccade_duration_ms(double speed_dps,
                                           double latency_ms) {
  const double v = speed_dps / 1000.0;  // deg per ms
  const double slope = 2.2 * v;
  if (slope >= 1.0) return saccade_duration_ms(speed_dps * latency_ms / 1000.0);
  return (slope * latency_ms + 21.0) / (1.0 - slope);
}

inline double catch_up_saccade_amplitude_deg(double speed_dps,
                                             double latency_ms) {
  return speed_dps / 1000.0 *
         (latency_ms + catch_up_saccade_duration_ms(speed_dps, latency_ms));
}

}  // namespace gazekit
