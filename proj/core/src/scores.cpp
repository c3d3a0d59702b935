#include "gazekit/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "gazekit/error.hpp"
#include "gazekit/kinematics.hpp"
#include "gazekit/motion_model.hpp"

namespace gazekit {

namespace {

void check_aligned(const LabelSequence& labels, const StimulusTrack& stimulus,
                   const GazeRecording* recording = nullptr) {
  if (labels.size() != stimulus.size() ||
      (recording && recording->size() != labels.size())) {
    raise(Errc::Internal, "labels, stimulus and recording must be aligned");
  }
}

struct LabelRun {
  Label label;
  std::size_t first;
  std::size_t last;
};

std::vector<LabelRun> label_runs(const LabelSequence& labels) {
  std::vector<LabelRun> runs;
  for (std::size_t i = 0; i < labels.size();) {
    std::size_t j = i;
    while (j + 1 < labels.size() && labels[j + 1] == labels[i]) ++j;
    runs.push_back({labels[i], i, j});
    i = j + 1;
  }
  return runs;
}

double distance_to_stimulus(const GazeSample& g, const StimulusSample& s) {
  return euclidean_distance(g.x, g.y, s.x, s.y);
}

}  // namespace

std::vector<IntendedRun> intended_runs(const StimulusTrack& stimulus) {
  std::vector<IntendedRun> runs;
  const auto& s = stimulus.samples;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1].intended == s[i].intended) ++j;
    runs.push_back({s[i].intended, i, j});
    i = j + 1;
  }
  return runs;
}

double fqns(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording, double proximity_deg) {
  check_aligned(labels, stimulus, &recording);
  std::size_t den = 0, num = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (stimulus.samples[i].intended != Label::Fixation) continue;
    ++den;
    if (labels[i] == Label::Fixation &&
        recording.samples[i].valid &&
        distance_to_stimulus(recording.samples[i], stimulus.samples[i]) <=
            proximity_deg) {
      ++num;
    }
  }
  if (den == 0) {
    raise(Errc::UndefinedScore, "FQnS undefined: no fixation stimulus");
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

double sqns(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording, const LatencyModel& latency) {
  check_aligned(labels, stimulus, &recording);
  const auto& stim = stimulus.samples;
  const auto& gaze = recording.samples;

  double stimulus_amplitude = 0.0;
  std::vector<std::pair<double, double>> windows;  // [open, close] in ms
  for (const auto& run : intended_runs(stimulus)) {
    if (run.label != Label::Saccade) continue;
    const std::size_t before = run.first > 0 ? run.first - 1 : run.first;
    stimulus_amplitude += euclidean_distance(
        stim[before].x, stim[before].y, stim[run.last].x, stim[run.last].y);
    const double onset = stim[run.first].timestamp_ms;
    windows.emplace_back(onset - latency.pursuit_latency_ms,
                         onset + latency.pursuit_latency_ms +
                             latency.min_pause_ms);
  }
  if (windows.empty() || stimulus_amplitude <= 0.0) {
    raise(Errc::UndefinedScore, "SQnS undefined: stimulus contains no step");
  }

  double detected_amplitude = 0.0;
  for (const auto& run : label_runs(labels)) {
    if (run.label != Label::Saccade) continue;
    const double t0 = gaze[run.first].timestamp_ms;
    const double t1 = gaze[run.last].timestamp_ms;
    const bool in_window = std::any_of(
        windows.begin(), windows.end(),
        [&](const auto& w) { return t0 <= w.second && t1 >= w.first; });
    if (!in_window) continue;
    // Amplitude between the flanking positions, which stays meaningful
    // at low sampling rates where a saccade spans one or two samples.
    const std::size_t a = run.first > 0 ? run.first - 1 : run.first;
    const std::size_t b =
        run.last + 1 < gaze.size() ? run.last + 1 : run.last;
    detected_amplitude +=
        euclidean_distance(gaze[a].x, gaze[a].y, gaze[b].x, gaze[b].y);
  }
  return 100.0 * detected_amplitude / stimulus_amplitude;
}

double pqns(const LabelSequence& labels, const StimulusTrack& stimulus) {
  check_aligned(labels, stimulus);
  std::size_t den = 0, num = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (stimulus.samples[i].intended != Label::SmoothPursuit) continue;
    ++den;
    if (labels[i] == Label::SmoothPursuit) ++num;
  }
  if (den == 0) {
    raise(Errc::UndefinedScore, "PQnS undefined: no pursuit stimulus");
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

double misfix(const LabelSequence& labels, const StimulusTrack& stimulus) {
  check_aligned(labels, stimulus);
  std::size_t den = 0, num = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (stimulus.samples[i].intended != Label::Fixation) continue;
    ++den;
    if (labels[i] == Label::SmoothPursuit) ++num;
  }
  if (den == 0) {
    raise(Errc::UndefinedScore, "MisFix undefined: no fixation stimulus");
  }
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

double fqls(const LabelSequence& labels, const StimulusTrack& stimulus,
            const GazeRecording& recording) {
  check_aligned(labels, stimulus, &recording);
  double total = 0.0;
  std::size_t compared = 0;
  for (const auto& run : label_runs(labels)) {
    if (run.label != Label::Fixation) continue;
    double cx = 0.0, cy = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = run.first; i <= run.last; ++i) {
      if (!recording.samples[i].valid) continue;
      cx += recording.samples[i].x;
      cy += recording.samples[i].y;
      ++valid;
    }
    if (valid == 0) continue;
    cx /= static_cast<double>(valid);
    cy /= static_cast<double>(valid);
    for (std::size_t i = run.first; i <= run.last; ++i) {
      if (stimulus.samples[i].intended != Label::Fixation) continue;
      total += euclidean_distance(cx, cy, stimulus.samples[i].x,
                                  stimulus.samples[i].y);
      ++compared;
    }
  }
  if (compared == 0) {
    raise(Errc::UndefinedScore,
          "FQlS undefined: no detected fixation during fixation stimulus");
  }
  return total / static_cast<double>(compared);
}

std::pair<double, double> pqls(const LabelSequence& labels,
                               const StimulusTrack& stimulus,
                               const GazeRecording& recording) {
  check_aligned(labels, stimulus, &recording);
  const auto gaze_v = compute_velocities(recording);

  GazeRecording stim_rec;
  stim_rec.rate_hz = recording.rate_hz;
  stim_rec.samples.reserve(stimulus.size());
  for (const auto& s : stimulus.samples) {
    stim_rec.samples.push_back({s.timestamp_ms, s.x, s.y, true});
  }
  const auto stim_v = compute_velocities(stim_rec);

  double pos_total = 0.0, vel_total = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Label::SmoothPursuit ||
        stimulus.samples[i].intended != Label::SmoothPursuit ||
        !recording.samples[i].valid) {
      continue;
    }
    pos_total += distance_to_stimulus(recording.samples[i], stimulus.samples[i]);
    vel_total += std::abs(gaze_v[i] - stim_v[i]);
    ++compared;
  }
  if (compared == 0) {
    raise(Errc::UndefinedScore,
          "PQlS undefined: no detected pursuit during pursuit stimulus");
  }
  return {pos_total / static_cast<double>(compared),
          vel_total / static_cast<double>(compared)};
}

ScoreReport score_all(const LabelSequence& labels,
                      const StimulusTrack& stimulus,
                      const GazeRecording& recording,
                      const ScoreOptions& options) {
  ScoreReport r;
  r.fqns = fqns(labels, stimulus, recording, options.proximity_deg);
  r.sqns = sqns(labels, stimulus, recording, options.latency);
  r.pqns = pqns(labels, stimulus);
  r.misfix = misfix(labels, stimulus);
  r.fqls = fqls(labels, stimulus, recording);
  std::tie(r.pqls_p, r.pqls_v) = pqls(labels, stimulus, recording);
  return r;
}

ScoreReport ideal_scores(const StimulusTrack& stimulus,
                         const LatencyModel& latency) {
  if (stimulus.empty()) {
    raise(Errc::UnsupportedStimulus, "empty stimulus track");
  }
  const auto runs = intended_runs(stimulus);
  const auto& stim = stimulus.samples;

  double fixation_time = 0.0;
  double pursuit_time = 0.0;
  double pursuit_loss = 0.0;   // latency + catch-up, per ramp
  double fixation_loss = 0.0;  // step responses + pursuit termination
  double misfix_time = 0.0;
  std::size_t steps = 0, ramps = 0;

  // Duration of a run, counting one nominal period per sample.
  const double period =
      stim.size() >= 2
          ? (stim.back().timestamp_ms - stim.front().timestamp_ms) /
                static_cast<double>(stim.size() - 1)
          : 0.0;
  auto run_duration = [&](const IntendedRun& r) {
    return static_cast<double>(r.last - r.first + 1) * period;
  };

  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    switch (run.label) {
      case Label::Fixation:
        fixation_time += run_duration(run);
        break;
      case Label::Saccade: {
        ++steps;
        // The ideal eye keeps fixating off-target through its response
        // latency, then saccades; net cost one latency of fixation
        // stimulus (the stimulus' own step run is not fixation stimulus).
        fixation_loss += latency.pursuit_latency_ms;
        break;
      }
      case Label::SmoothPursuit: {
        ++ramps;
        const double duration = run_duration(run);
        pursuit_time += duration;
        const double speed =
            euclidean_distance(stim[run.first].x, stim[run.first].y,
                               stim[run.last].x, stim[run.last].y) /
            std::max(duration, 1e-9) * 1000.0;  // deg/s
        const double catch_up =
            catch_up_saccade_duration_ms(speed, latency.pursuit_latency_ms);
        pursuit_loss += std::min(duration,
                                 latency.pursuit_latency_ms + catch_up);
        // Pursuit termination spills into the following fixation, then a
        // corrective saccade brings the eye back onto the target.
        const bool followed_by_fixation =
            k + 1 < runs.size() && runs[k + 1].label == Label::Fixation;
        if (followed_by_fixation) {
          misfix_time += latency.pursuit_latency_ms;
          const double overshoot =
              speed / 1000.0 * latency.pursuit_latency_ms;
          fixation_loss += latency.pursuit_latency_ms +
                           saccade_duration_ms(overshoot);
        }
        break;
      }
      case Label::Unclassified:
        raise(Errc::UnsupportedStimulus,
              "stimulus track carries unclassified intent");
    }
  }

  if (fixation_time <= 0.0) {
    raise(Errc::UnsupportedStimulus,
          "not a step-ramp design: no fixation stimulus");
  }

  ScoreReport r;
  r.fqns = 100.0 * std::max(0.0, fixation_time - fixation_loss) / fixation_time;
  r.sqns = steps > 0 ? 100.0 : std::numeric_limits<double>::quiet_NaN();
  r.pqns = ramps > 0
               ? 100.0 * std::max(0.0, pursuit_time - pursuit_loss) /
                     pursuit_time
               : std::numeric_limits<double>::quiet_NaN();
  r.misfix = 100.0 * misfix_time / fixation_time;
  r.fqls = 0.0;
  r.pqls_p = 0.0;
  r.pqls_v = 0.0;
  return r;
}

std::string score_report_to_json(const ScoreReport& report) {
  nlohmann::ordered_json j;
  j["fqns"] = report.fqns;
  j["sqns"] = report.sqns;
  j["pqns"] = report.pqns;
  j["misfix"] = report.misfix;
  j["fqls"] = report.fqls;
  j["pqls_p"] = report.pqls_p;
  j["pqls_v"] = report.pqls_v;
  j["classification_time_s"] = report.classification_time_s;
  return j.dump(2) + "\n";
}

ScoreReport score_report_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(Errc::FormatError, "malformed score report JSON");
  }
  ScoreReport r;
  try {
    r.fqns = j.at("fqns").get<double>();
    r.sqns = j.at("sqns").get<double>();
    r.pqns = j.at("pqns").get<double>();
    r.misfix = j.at("misfix").get<double>();
    r.fqls = j.at("fqls").get<double>();
    r.pqls_p = j.at("pqls_p").get<double>();
    r.pqls_v = j.at("pqls_v").get<double>();
    r.classification_time_s = j.at("classification_time_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::FormatError, std::string("score report JSON: ") + e.what());
  }
  return r;
}

}  // namespace gazekit
