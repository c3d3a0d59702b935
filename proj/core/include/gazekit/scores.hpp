#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

/// The seven behavioral scores plus the measured classification time.
/// Quantitative scores (fqns, sqns, pqns, misfix) are percentages;
/// fqls/pqls_p are degrees, pqls_v is deg/s. sqns may exceed 100 when
/// overshoot and corrective saccades add detected amplitude.
struct ScoreReport {
  double fqns = 0.0;
  double sqns = 0.0;
  double pqns = 0.0;
  double misfix = 0.0;
  double fqls = 0.0;
  double pqls_p = 0.0;
  double pqls_v = 0.0;
  double classification_time_s = 0.0;
};

/// Timing assumptions about a healthy oculomotor response.
struct LatencyModel {
  double pursuit_latency_ms = 140.0;   // target motion to response onset
  double fixation_info_floor_ms = 100.0;
  double min_pause_ms = 200.0;
};

struct ScoreOptions {
  double proximity_deg = 1.0;  // fixation-on-target tolerance for FQnS
  LatencyModel latency{};
};

/// Fixation quantitative score: share of fixation-stimulus samples that
/// are labeled fixation with gaze within proximity of the stimulus.
double fqns(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording, double proximity_deg = 1.0);

/// Saccade quantitative score: detected saccade amplitude that falls in
/// a temporal window around each stimulus step, as a percentage of the
/// stimulus step amplitude. The window opens pursuit_latency before the
/// step onset (anticipatory saccades) and closes pursuit_latency +
/// min_pause after it, late enough to admit the response saccade and
/// one corrective.
double sqns(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording, const LatencyModel& latency = {});

/// Pursuit quantitative score: correctly labeled share of the smooth
/// pursuit stimulus.
double pqns(const LabelSequence& labels, const StimulusTrack& stimulus);

/// Misclassified fixation score: fixation-stimulus samples labeled
/// smooth pursuit, as a percentage of the fixation stimulus.
double misfix(const LabelSequence& labels, const StimulusTrack& stimulus);

/// Fixation qualitative score: mean distance between each detected
/// fixation group's centroid and the stimulus, over fixation-stimulus
/// samples inside detected fixations.
double fqls(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording);

/// Pursuit qualitative scores: mean gaze-to-stimulus distance and mean
/// absolute velocity difference over correctly labeled pursuit samples.
std::pair<double, double> pqls(const LabelSequence& labels,
                               const StimulusTrack& stimulus,
                               const GazeRecording& recording);

/// All seven scores at once; classification_time_s is left for the
/// caller to fill. Throws UndefinedScore as the individual scores do.
ScoreReport score_all(const LabelSequence& labels,
                      const StimulusTrack& stimulus,
                      const GazeRecording& recording,
                      const ScoreOptions& options = {});

/// Expected scores of a behaviorally ideal observer on this stimulus:
/// quantitative scores discounted for pursuit latency, catch-up and
/// corrective saccades; MisFix raised by pursuit termination spilling
/// into the following fixation; qualitative scores zero. Components
/// whose stimulus is absent come back as NaN (pqns with no ramps).
///
/// Throws UnsupportedStimulus when the track has no fixation stimulus.
ScoreReport ideal_scores(const StimulusTrack& stimulus,
                         const LatencyModel& latency = {});

/// JSON object with exactly the fields fqns, sqns, pqns, misfix, fqls,
/// pqls_p, pqls_v, classification_time_s.
std::string score_report_to_json(const ScoreReport& report);
ScoreReport score_report_from_json(const std::string& json_text);

/// Maximal runs of identical intended labels, as [first, last] sample
/// index pairs. Used by the scores and exposed for tests.
struct IntendedRun {
  Label label;
  std::size_t first;
  std::size_t last;
};
std::vector<IntendedRun> intended_runs(const StimulusTrack& stimulus);

}  // namespace gazekit
