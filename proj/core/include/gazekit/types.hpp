#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gazekit {

/// Per-sample classification outcome. Unclassified only appears in
/// intermediate passes; finished classifiers label every sample.
enum class Label : std::uint8_t {
  Fixation = 0,
  Saccade = 1,
  SmoothPursuit = 2,
  Unclassified = 3,
};

const char* label_code(Label l);                 // FIX | SAC | SP | UNC
std::optional<Label> label_from_code(const std::string& code);

using LabelSequence = std::vector<Label>;

/// One monocular gaze sample in degrees of visual angle.
/// valid=false marks tracker loss; x/y are NaN in that case.
struct GazeSample {
  double timestamp_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
  bool valid = true;
};

/// Uniformly sampled gaze trace. Samples are strictly ordered by
/// timestamp and the median inter-sample interval stays within 10% of
/// the nominal period; validate_recording() enforces both.
struct GazeRecording {
  std::vector<GazeSample> samples;
  double rate_hz = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// Per-sample stimulus position plus the behavior the stimulus was
/// designed to elicit at that instant.
struct StimulusSample {
  double timestamp_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
  Label intended = Label::Fixation;
};

struct StimulusTrack {
  std::vector<StimulusSample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// The three classification thresholds. Defaults are the tuned
/// operating point for the hybrid classifier.
struct ThresholdSet {
  double velocity_dps = 75.0;    // saccade velocity threshold, deg/s
  double dispersion_deg = 0.67;  // fixation/pursuit dispersion threshold
  double duration_ms = 150.0;    // minimum temporal window

  bool valid() const noexcept {
    return velocity_dps > 0.0 && dispersion_deg > 0.0 && duration_ms > 0.0;
  }
};

/// A recording with whatever aligned side-channels the source provided.
struct AlignedData {
  GazeRecording recording;
  std::optional<StimulusTrack> stimulus;
  std::optional<LabelSequence> truth;
};

inline double euclidean_distance(double ax, double ay, double bx, double by) {
  return std::hypot(bx - ax, by - ay);
}

/// Throws OrderingError on non-monotone timestamps and FormatError when
/// the median interval disagrees with rate_hz by more than 10%.
void validate_recording(const GazeRecording& rec);

inline const char* label_code(Label l) {
  switch (l) {
    case Label::Fixation: return "FIX";
    case Label::Saccade: return "SAC";
    case Label::SmoothPursuit: return "SP";
    case Label::Unclassified: return "UNC";
  }
  return "UNC";
}

inline std::optional<Label> label_from_code(const std::string& code) {
  if (code == "FIX") return Label::Fixation;
  if (code == "SAC") return Label::Saccade;
  if (code == "SP") return Label::SmoothPursuit;
  if (code == "UNC") return Label::Unclassified;
  return std::nullopt;
}

}  // namespace gazekit
