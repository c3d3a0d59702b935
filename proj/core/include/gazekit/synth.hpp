#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

/// Stimulus building blocks. A step jumps the target instantly and the
/// track marks the main-sequence duration of the expected response as
/// saccade-intended; a ramp moves the target at constant speed and is
/// pursuit-intended throughout.
struct FixationSegment {
  double duration_ms = 0.0;
  /// Absolute target position; holds the current position when absent.
  std::optional<double> x;
  std::optional<double> y;
};

struct StepSegment {
  double amplitude_deg = 0.0;
  double direction_deg = 0.0;  // 0 = +x, counter-clockwise
};

struct RampSegment {
  double duration_ms = 0.0;
  double speed_dps = 0.0;
  double direction_deg = 0.0;
};

using StimulusSegment =
    std::variant<FixationSegment, StepSegment, RampSegment>;

struct StimulusSpec {
  std::vector<StimulusSegment> segments;
  double rate_hz = 1000.0;
};

/// Behavioral parameters of the simulated observer.
struct OculomotorSpec {
  double pursuit_latency_ms = 140.0;
  /// Step-response saccades are shortened, if needed, until their
  /// minimum-jerk profile peaks at least this fast.
  double saccade_peak_velocity_dps = 310.0;
  bool catch_up_saccade = true;
  double noise_std_deg = 0.05;
  /// Correlation time of the additive position noise. Tracker noise is
  /// band-limited; uncorrelated noise at 1000 Hz would swamp sample-to-
  /// sample velocities. 0 selects white noise.
  double noise_time_constant_ms = 30.0;
  std::uint64_t seed = 0;
};

/// The stimulus used throughout the tests: ten fixations around five
/// steps (6-8 deg) and four 343 ms, 10 deg/s ramps; 9.6 s at 1000 Hz.
StimulusSpec default_stimulus_spec();

/// Parses the JSON form of a StimulusSpec (see README for the schema).
/// Throws InvalidSpec on malformed or constraint-violating input.
StimulusSpec stimulus_spec_from_json(const std::string& json_text);
std::string stimulus_spec_to_json(const StimulusSpec& spec);

/// Samples the spec into a per-sample track with intended labels.
/// Throws InvalidSpec for empty segment lists or invalid parameters.
StimulusTrack generate_stimulus(const StimulusSpec& spec);

struct SimulatedGaze {
  GazeRecording recording;
  LabelSequence truth;  // what the simulated eye actually did
};

/// Simulates a healthy observer following the track: responses delayed
/// by the pursuit latency, steps answered with minimum-jerk saccades,
/// ramps acquired with a catch-up saccade (when enabled) and released
/// with an overshoot-plus-corrective at ramp end. Deterministic in
/// (track, spec): the same seed reproduces identical output bits.
SimulatedGaze simulate_gaze(const StimulusTrack& track,
                            const OculomotorSpec& ocu);

/// generate_stimulus + simulate_gaze bundled into an AlignedData with
/// ground truth attached.
AlignedData synthesize(const StimulusSpec& spec, const OculomotorSpec& ocu);

}  // namespace gazekit
