#pragma once

#include <array>
#include <span>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

/// Gaussian emission parameters for one state, in feature units.
struct GaussianParams {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Lower bound applied to estimated standard deviations so constant or
/// single-sample classes never produce a zero-width emission density.
inline constexpr double kStddevFloor = 1e-6;

/// 2x2 state transition probabilities, indexed [from][to].
struct TransitionMatrix {
  std::array<std::array<double, 2>, 2> p{{{0.0, 0.0}, {0.0, 0.0}}};

  double& operator()(int from, int to) { return p[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]; }
  double operator()(int from, int to) const { return p[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]; }
};

enum class TransitionNormalization {
  /// Transition counts divided by the total number of records. Not
  /// row-stochastic, but this is the literal published rule.
  CountOverRecords,
  /// Counts divided by the outgoing transitions of the "from" state.
  RowStochastic,
};

/// Numeric guards for linear-space decoding. Emission products shrink
/// geometrically, so without these a long sequence collapses to all-zero
/// columns and the traceback becomes meaningless.
struct NumericGuardConfig {
  bool enabled = true;
  /// Guard (a): a single zero observation probability is reset to this
  /// fraction of the other state's value.
  double zero_reset_ratio = 1e-4;
  /// Guard (b): when both observation probabilities are zero, or a whole
  /// emission column zeroes out, both entries restart from this value.
  double initial_reset_value = 0.5;
  /// Guard (c): when the column maximum drops below this bound, both
  /// entries are rescaled by one shared power of two, which restores
  /// magnitude while preserving their ratio exactly.
  double emission_lower_bound = 1e-100;
  /// Compatibility switch: multiply both entries by log10(column max)
  /// instead of the exact power-of-two rescale. For sub-1 maxima that
  /// logarithm is negative, so this flips signs; kept only to reproduce
  /// the originally described arithmetic.
  bool literal_log10_rescale = false;
};

struct ConvergenceConfig {
  double epsilon_mean = 0.01;        // feature units
  double epsilon_stddev = 0.01;      // feature units
  double epsilon_transition = 0.001; // probability
  int max_iterations = 100;          // 0 = return the seed labeling as-is
};

struct HmmModel {
  std::array<GaussianParams, 2> state_params;
  TransitionMatrix transitions;
  NumericGuardConfig guard;
};

/// Gaussian density. Throws InvalidParameter when stddev <= 0. May
/// underflow to exactly 0 for far-out observations; callers guard that.
double gaussian_pdf(double x, const GaussianParams& params);

/// Per-state sample mean and n-1 standard deviation (floored at
/// kStddevFloor). states holds 0/1 per feature. Throws EmptyClass when
/// either state has no samples.
std::array<GaussianParams, 2> estimate_gaussian_params(
    std::span<const double> features, std::span<const int> states);

/// Transition matrix from an observed 0/1 state sequence of length >= 2.
TransitionMatrix count_transitions(
    std::span<const int> states,
    TransitionNormalization norm = TransitionNormalization::CountOverRecords);

struct DecodeResult {
  std::vector<int> states;
  /// Final-column maximum of the emission matrix. With guards enabled
  /// this is rescaled, not a true path probability.
  double probability = 0.0;
  /// Smallest column maximum seen during the run, after guards. Stays
  /// positive whenever guards are enabled.
  double min_column_max = 0.0;
};

/// Most probable 2-state path under Gaussian emissions.
///
/// Column 0 holds the normalized observation probabilities; every later
/// column takes, per state, the best previous emission times transition
/// probability times the state's observation probability, with the
/// predecessor argmax recorded for traceback. Guards (a)/(b) repair zero
/// observation columns before normalization and guard (c) rescales
/// near-underflow emission columns. All argmax ties break toward the
/// lower state index.
DecodeResult viterbi_decode(std::span<const double> features,
                            const HmmModel& model);

struct RefineResult {
  std::vector<int> states;
  int iterations = 0;
  bool converged = false;
  /// True when a decode pass emptied one state and the previous
  /// labeling was kept instead.
  bool degenerated = false;
};

/// Iterative re-estimation loop: estimate Gaussians and transitions from
/// the current labeling, decode, relabel; stop when the parameter deltas
/// drop below the epsilons or max_iterations is reached. A decode that
/// empties a state reverts to the previous labeling and stops.
///
/// max_iterations == 0 returns the seed labeling untouched (no decode).
RefineResult viterbi_refine(
    std::span<const double> features, std::span<const int> initial_states,
    const ConvergenceConfig& conv, const NumericGuardConfig& guard,
    TransitionNormalization norm = TransitionNormalization::CountOverRecords);

/// Guard (c) applied to one emission column; exposed for verification.
/// Returns true when the column was rescaled or reset.
bool apply_emission_floor_guard(std::array<double, 2>& column,
                                const NumericGuardConfig& guard);

}  // namespace gazekit
