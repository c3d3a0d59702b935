#include "gazekit/resample.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gazekit/error.hpp"

namespace gazekit {

AlignedData resample(const AlignedData& input, double target_hz) {
  const GazeRecording& rec = input.recording;
  if (target_hz <= 0.0) {
    raise(Errc::InvalidParameter, "target rate must be positive");
  }
  if (target_hz > rec.rate_hz) {
    raise(Errc::UpsamplingUnsupported,
          "target rate " + std::to_string(target_hz) +
              " Hz exceeds native rate " + std::to_string(rec.rate_hz) +
              " Hz");
  }
  if (rec.empty()) {
    raise(Errc::InsufficientData, "cannot resample an empty recording");
  }

  const double first_ts = rec.samples.front().timestamp_ms;
  const double last_ts = rec.samples.back().timestamp_ms;
  const double step_ms = 1000.0 / target_hz;

  // Grid points at first_ts + k*step for every k whose grid time lies
  // inside the recording; nearest input sample per grid point.
  std::vector<std::size_t> indices;
  std::size_t cursor = 0;
  for (std::size_t k = 0;; ++k) {
    const double t = first_ts + static_cast<double>(k) * step_ms;
    if (t > last_ts + 1e-9) break;
    while (cursor + 1 < rec.samples.size() &&
           rec.samples[cursor + 1].timestamp_ms < t) {
      ++cursor;
    }
    std::size_t pick = cursor;
    if (cursor + 1 < rec.samples.size()) {
      const double d_lo = t - rec.samples[cursor].timestamp_ms;
      const double d_hi = rec.samples[cursor + 1].timestamp_ms - t;
      if (d_hi < d_lo) pick = cursor + 1;  // ties keep the earlier sample
    }
    indices.push_back(pick);
  }

  AlignedData out;
  out.recording.rate_hz = target_hz;
  out.recording.samples.reserve(indices.size());
  for (std::size_t i : indices) out.recording.samples.push_back(rec.samples[i]);

  if (input.stimulus) {
    StimulusTrack st;
    st.samples.reserve(indices.size());
    for (std::size_t i : indices) st.samples.push_back(input.stimulus->samples[i]);
    out.stimulus = std::move(st);
  }
  if (input.truth) {
    LabelSequence tr;
    tr.reserve(indices.size());
    for (std::size_t i : indices) tr.push_back((*input.truth)[i]);
    out.truth = std::move(tr);
  }
  return out;
}

}  // namespace gazekit
