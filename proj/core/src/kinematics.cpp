#include "gazekit/kinematics.hpp"

#include <algorithm>

#include "gazekit/error.hpp"

namespace gazekit {

std::vector<double> compute_velocities(const GazeRecording& recording) {
  const auto& s = recording.samples;
  if (s.size() < 2) {
    raise(Errc::InsufficientData,
          "compute_velocities requires at least 2 samples, got " +
              std::to_string(s.size()));
  }

  std::vector<double> v(s.size(), 0.0);
  double carry = 0.0;  // last velocity from a fully valid pair
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].valid && s[i - 1].valid) {
      const double dt_s = (s[i].timestamp_ms - s[i - 1].timestamp_ms) / 1000.0;
      const double dist =
          euclidean_distance(s[i - 1].x, s[i - 1].y, s[i].x, s[i].y);
      carry = dist / dt_s;
    }
    v[i] = carry;
  }
  v[0] = v[1];
  return v;
}

double compute_dispersion(std::span<const GazeSample> window) {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool seen = false;
  for (const auto& s : window) {
    if (!s.valid) continue;
    if (!seen) {
      min_x = max_x = s.x;
      min_y = max_y = s.y;
      seen = true;
    } else {
      min_x = std::min(min_x, s.x);
      max_x = std::max(max_x, s.x);
      min_y = std::min(min_y, s.y);
      max_y = std::max(max_y, s.y);
    }
  }
  if (!seen) {
    raise(Errc::UndefinedDispersion,
          "dispersion window contains no valid sample");
  }
  return (max_x - min_x) + (max_y - min_y);
}

}  // namespace gazekit
