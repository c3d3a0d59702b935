#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gazekit/hmm.hpp"
#include "gazekit/types.hpp"

namespace gazekit {

/// Velocity-threshold pass: Saccade where velocity strictly exceeds the
/// threshold, Fixation otherwise (here "Fixation" still means
/// fixation-or-pursuit; a later pass splits them).
LabelSequence classify_ivt(const GazeRecording& recording,
                           double velocity_threshold_dps);

/// Non-saccade samples in order, each remembering its original index.
struct WorkingSubset {
  std::vector<GazeSample> samples;
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

WorkingSubset filter_saccades(const GazeRecording& recording,
                              const LabelSequence& labels);

struct IdtResult {
  LabelSequence labels;  // Fixation | SmoothPursuit, one per subset sample
  /// Set when the subset never spanned a full window; everything was
  /// marked SmoothPursuit.
  bool short_data = false;
};

/// Dispersion-window pass over a saccade-free subset. A window of
/// minimum duration Wt slides over the samples: while its dispersion
/// stays below Dt it grows one point at a time and its points become
/// fixations; otherwise the first point becomes smooth pursuit and the
/// window advances one point. Trailing points shorter than a window
/// inherit the last decision.
IdtResult classify_idt_window(const WorkingSubset& subset,
                              double dispersion_threshold_deg,
                              double duration_ms);

/// Recombines saccade labels with subset labels. Positions not covered
/// by the index map keep saccade_labels' value; covered positions take
/// the subset label. Throws Internal on index collisions.
LabelSequence merge_labels(const LabelSequence& saccade_labels,
                           const LabelSequence& subset_labels,
                           const std::vector<std::size_t>& indices);

/// Threshold-only tertiary classifier: velocity pass, saccade removal,
/// dispersion-window pass, merge.
LabelSequence classify_ivdt(const GazeRecording& recording,
                            const ThresholdSet& thresholds);

struct IvdtHmmResult {
  LabelSequence labels;
  bool stage1_refined = false;
  bool stage2_refined = false;
  int stage1_iterations = 0;
  int stage2_iterations = 0;
  std::vector<std::string> warnings;
};

/// Hybrid classifier: the velocity pass seeds a two-state refinement
/// over per-sample velocities (saccade vs rest); saccades are then
/// filtered out and the dispersion-window pass seeds a second two-state
/// refinement over forward-window dispersions (fixation vs pursuit);
/// finally saccades are merged back.
///
/// When a stage's seed populates only one state, that stage keeps its
/// threshold labels and a warning is recorded. max_iterations == 0 on
/// both stages reproduces classify_ivdt exactly.
IvdtHmmResult run_ivdt_hmm(const GazeRecording& recording,
                           const ThresholdSet& thresholds,
                           const ConvergenceConfig& conv = {},
                           const NumericGuardConfig& guard = {});

LabelSequence classify_ivdt_hmm(const GazeRecording& recording,
                                const ThresholdSet& thresholds,
                                const ConvergenceConfig& conv = {},
                                const NumericGuardConfig& guard = {});

/// Per-subset-sample dispersion feature: dispersion of the window of
/// the given duration starting at the sample (forward over subsequent
/// subset samples). Exposed for the second refinement stage and tests.
std::vector<double> forward_window_dispersions(const WorkingSubset& subset,
                                               double duration_ms);

// --- Bayesian baseline ----------------------------------------------------

enum class FixationThresholdMode {
  Zero,          // fixations assumed perfectly still
  Mean,          // running mean velocity of fixation-labeled samples
  MeanPlusKSigma // running mean + k * running stddev
};

struct IbdtConfig {
  double temporal_window_ms = 150.0;
  FixationThresholdMode fixation_threshold_mode = FixationThresholdMode::Mean;
  double k_sigma = 1.0;             // used by MeanPlusKSigma
  double saccade_threshold_dps = 75.0;

  bool valid() const noexcept {
    return temporal_window_ms > 0.0 && saccade_threshold_dps > 0.0 &&
           k_sigma >= 0.0;
  }
};

/// Posterior from per-class likelihoods and priors, normalized to sum
/// to 1. Order: Fixation, Saccade, SmoothPursuit.
std::array<double, 3> ibdt_posterior(const std::array<double, 3>& likelihood,
                                     const std::array<double, 3>& prior);

/// Simplified Bayesian baseline. Features per sample: velocity and the
/// movement ratio (fraction of trailing-window samples whose velocity
/// exceeds the fixation threshold). Priors are the window average of
/// previous posteriors (uniform until the first full window), floored
/// so no class can be locked out permanently.
LabelSequence classify_ibdt(const GazeRecording& recording,
                            const IbdtConfig& config);

}  // namespace gazekit
