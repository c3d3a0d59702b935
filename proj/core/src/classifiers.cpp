#include "gazekit/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "gazekit/error.hpp"
#include "gazekit/kinematics.hpp"

namespace gazekit {

LabelSequence classify_ivt(const GazeRecording& recording,
                           double velocity_threshold_dps) {
  if (!(velocity_threshold_dps > 0.0)) {
    raise(Errc::InvalidParameter, "velocity threshold must be positive");
  }
  const auto velocities = compute_velocities(recording);
  LabelSequence labels(recording.size(), Label::Fixation);
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    if (velocities[i] > velocity_threshold_dps) labels[i] = Label::Saccade;
  }
  return labels;
}

WorkingSubset filter_saccades(const GazeRecording& recording,
                              const LabelSequence& labels) {
  if (labels.size() != recording.size()) {
    raise(Errc::Internal, "labels not aligned with recording");
  }
  WorkingSubset subset;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Label::Saccade) {
      subset.samples.push_back(recording.samples[i]);
      subset.indices.push_back(i);
    }
  }
  return subset;
}

namespace {

// Running dispersion bounds for a grow-only window.
struct DispersionBounds {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool seen = false;

  void add(const GazeSample& s) {
    if (!s.valid) return;
    if (!seen) {
      min_x = max_x = s.x;
      min_y = max_y = s.y;
      seen = true;
      return;
    }
    min_x = std::min(min_x, s.x);
    max_x = std::max(max_x, s.x);
    min_y = std::min(min_y, s.y);
    max_y = std::max(max_y, s.y);
  }

  // Windows of invalid-only samples count as zero spread.
  double dispersion() const {
    return seen ? (max_x - min_x) + (max_y - min_y) : 0.0;
  }
};

}  // namespace

IdtResult classify_idt_window(const WorkingSubset& subset,
                              double dispersion_threshold_deg,
                              double duration_ms) {
  if (!(dispersion_threshold_deg > 0.0) || !(duration_ms > 0.0)) {
    raise(Errc::InvalidParameter, "dispersion and duration must be positive");
  }

  const auto& s = subset.samples;
  const std::size_t n = s.size();
  IdtResult result;
  result.labels.assign(n, Label::Unclassified);
  if (n == 0) {
    result.short_data = true;
    return result;
  }

  auto window_end = [&](std::size_t i) -> std::size_t {
    // Smallest j with t[j] - t[i] >= duration; n when no window fits.
    std::size_t j = i;
    while (j < n && s[j].timestamp_ms - s[i].timestamp_ms < duration_ms) ++j;
    return j;
  };

  Label last_decision = Label::SmoothPursuit;
  bool any_window = false;
  std::size_t i = 0;
  while (i < n) {
    const std::size_t j = window_end(i);
    if (j >= n) break;  // tail shorter than a window
    any_window = true;

    DispersionBounds bounds;
    for (std::size_t k = i; k <= j; ++k) bounds.add(s[k]);

    if (bounds.dispersion() < dispersion_threshold_deg) {
      std::size_t end = j;
      while (end + 1 < n) {
        DispersionBounds grown = bounds;
        grown.add(s[end + 1]);
        if (grown.dispersion() >= dispersion_threshold_deg) break;
        bounds = grown;
        ++end;
      }
      for (std::size_t k = i; k <= end; ++k) result.labels[k] = Label::Fixation;
      last_decision = Label::Fixation;
      i = end + 1;
    } else {
      result.labels[i] = Label::SmoothPursuit;
      last_decision = Label::SmoothPursuit;
      ++i;
    }
  }
  for (std::size_t k = i; k < n; ++k) result.labels[k] = last_decision;
  result.short_data = !any_window;
  return result;
}

LabelSequence merge_labels(const LabelSequence& saccade_labels,
                           const LabelSequence& subset_labels,
                           const std::vector<std::size_t>& indices) {
  if (subset_labels.size() != indices.size()) {
    raise(Errc::Internal, "subset labels not aligned with index map");
  }
  LabelSequence merged = saccade_labels;
  std::vector<bool> taken(merged.size(), false);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t idx = indices[k];
    if (idx >= merged.size() || taken[idx]) {
      raise(Errc::Internal, "index map collision at subset position " +
                                std::to_string(k));
    }
    taken[idx] = true;
    merged[idx] = subset_labels[k];
  }
  return merged;
}

std::vector<double> forward_window_dispersions(const WorkingSubset& subset,
                                               double duration_ms) {
  const auto& s = subset.samples;
  const std::size_t n = s.size();
  std::vector<double> features(n, 0.0);
  double carry = 0.0;  // reused when a window holds no valid sample
  for (std::size_t i = 0; i < n; ++i) {
    DispersionBounds bounds;
    for (std::size_t j = i;
         j < n && s[j].timestamp_ms - s[i].timestamp_ms <= duration_ms; ++j) {
      bounds.add(s[j]);
    }
    if (bounds.seen) carry = bounds.dispersion();
    features[i] = carry;
  }
  return features;
}

LabelSequence classify_ivdt(const GazeRecording& recording,
                            const ThresholdSet& thresholds) {
  if (!thresholds.valid()) {
    raise(Errc::InvalidParameter, "thresholds must all be positive");
  }
  const LabelSequence ivt = classify_ivt(recording, thresholds.velocity_dps);
  const WorkingSubset subset = filter_saccades(recording, ivt);
  const IdtResult idt = classify_idt_window(subset, thresholds.dispersion_deg,
                                            thresholds.duration_ms);
  return merge_labels(ivt, idt.labels, subset.indices);
}

namespace {

std::vector<int> to_states(const LabelSequence& labels, Label one) {
  std::vector<int> states(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    states[i] = labels[i] == one ? 1 : 0;
  }
  return states;
}

bool single_state(const std::vector<int>& states) {
  return std::adjacent_find(states.begin(), states.end(),
                            std::not_equal_to<>()) == states.end();
}

}  // namespace

IvdtHmmResult run_ivdt_hmm(const GazeRecording& recording,
                           const ThresholdSet& thresholds,
                           const ConvergenceConfig& conv,
                           const NumericGuardConfig& guard) {
  if (!thresholds.valid()) {
    raise(Errc::InvalidParameter, "thresholds must all be positive");
  }
  IvdtHmmResult result;

  // Stage 1: saccade vs fixation-or-pursuit over velocities, seeded by
  // the threshold pass. State 0 = fixation-or-pursuit, state 1 = saccade.
  const auto velocities = compute_velocities(recording);
  const LabelSequence ivt = classify_ivt(recording, thresholds.velocity_dps);
  std::vector<int> stage1 = to_states(ivt, Label::Saccade);
  if (conv.max_iterations > 0) {
    if (single_state(stage1)) {
      result.warnings.push_back(
          "stage 1 seed has a single class; kept threshold labels");
    } else {
      RefineResult r = viterbi_refine(velocities, stage1, conv, guard);
      stage1 = std::move(r.states);
      result.stage1_refined = true;
      result.stage1_iterations = r.iterations;
      if (r.degenerated) {
        result.warnings.push_back(
            "stage 1 refinement degenerated; kept last stable labeling");
      }
    }
  }
  LabelSequence stage1_labels(recording.size());
  for (std::size_t i = 0; i < stage1.size(); ++i) {
    stage1_labels[i] = stage1[i] == 1 ? Label::Saccade : Label::Fixation;
  }

  // Stage 2: fixation vs pursuit over forward-window dispersions of the
  // saccade-free subset, seeded by the dispersion-window pass.
  // State 0 = fixation, state 1 = smooth pursuit.
  const WorkingSubset subset = filter_saccades(recording, stage1_labels);
  IdtResult idt = classify_idt_window(subset, thresholds.dispersion_deg,
                                      thresholds.duration_ms);
  if (idt.short_data) {
    result.warnings.push_back(
        "subset shorter than the temporal window; dispersion pass marked "
        "everything smooth pursuit");
  }
  std::vector<int> stage2 = to_states(idt.labels, Label::SmoothPursuit);
  if (conv.max_iterations > 0 && !subset.empty()) {
    if (single_state(stage2)) {
      result.warnings.push_back(
          "stage 2 seed has a single class; kept dispersion-window labels");
    } else {
      const auto features = forward_window_dispersions(
          subset, thresholds.duration_ms);
      RefineResult r = viterbi_refine(features, stage2, conv, guard);
      stage2 = std::move(r.states);
      result.stage2_refined = true;
      result.stage2_iterations = r.iterations;
      if (r.degenerated) {
        result.warnings.push_back(
            "stage 2 refinement degenerated; kept last stable labeling");
      }
    }
  }
  LabelSequence subset_labels(subset.size());
  for (std::size_t i = 0; i < stage2.size(); ++i) {
    subset_labels[i] = stage2[i] == 1 ? Label::SmoothPursuit : Label::Fixation;
  }

  result.labels = merge_labels(stage1_labels, subset_labels, subset.indices);
  return result;
}

LabelSequence classify_ivdt_hmm(const GazeRecording& recording,
                                const ThresholdSet& thresholds,
                                const ConvergenceConfig& conv,
                                const NumericGuardConfig& guard) {
  return run_ivdt_hmm(recording, thresholds, conv, guard).labels;
}

}  // namespace gazekit
