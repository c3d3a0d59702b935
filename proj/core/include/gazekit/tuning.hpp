#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gazekit/scores.hpp"
#include "gazekit/types.hpp"

namespace gazekit {

/// Threshold grid for parameter estimation. Defaults: every 5 deg/s
/// from 70 to 150 (17 values) by every 0.1 deg from 0.1 to 2.0
/// (20 values), duration fixed at 150 ms.
struct GridSpec {
  std::vector<double> velocity_grid;
  std::vector<double> dispersion_grid;
  double duration_ms = 150.0;

  static GridSpec defaults();
};

/// Per-score weights for the tuning objective. The qualitative pursuit
/// scores run high from normal catch-up behavior, so everything else is
/// upweighted tenfold by default.
struct WeightVector {
  double fqns = 10.0;
  double sqns = 10.0;
  double pqns = 10.0;
  double misfix = 10.0;
  double fqls = 10.0;
  double pqls_p = 1.0;
  double pqls_v = 1.0;

  std::array<double, 7> as_array() const {
    return {fqns, sqns, pqns, misfix, fqls, pqls_p, pqls_v};
  }
};

/// Weighted L1 distance between a report and the ideal scores:
/// sum over the seven scores of weight * |report - ideal|.
double objective(const ScoreReport& report, const ScoreReport& ideals,
                 const WeightVector& weights);

struct GridCell {
  double velocity_dps = 0.0;
  double dispersion_deg = 0.0;
  /// Mean objective across recordings; +infinity marks an infeasible
  /// cell (an undefined score came up).
  double cost = 0.0;
  /// Mean scores across recordings (NaN when infeasible).
  ScoreReport mean_scores;
};

struct GridSearchResult {
  ThresholdSet best;
  double best_cost = 0.0;
  std::vector<GridCell> table;  // grid order: velocity outer, dispersion inner
};

using Classifier =
    std::function<LabelSequence(const GazeRecording&, const ThresholdSet&)>;

/// Evaluates every (velocity, dispersion) cell over the recordings and
/// returns the argmin (ties broken toward smaller velocity, then smaller
/// dispersion) plus the complete cost table. Cells run in parallel,
/// capped by the GAZEKIT_THREADS environment variable; the table order
/// and the tie-break are deterministic regardless of thread count.
///
/// Throws NoFeasibleThreshold when every cell is infeasible and
/// InsufficientData when no recording has a stimulus.
GridSearchResult grid_search(std::span<const AlignedData> recordings,
                             const GridSpec& grid, const WeightVector& weights,
                             const Classifier& classifier,
                             const ScoreOptions& options = {});

/// CSV with one row per cell: vt,dt,cost plus one column per score.
void write_cost_table_csv(std::ostream& out,
                          const std::vector<GridCell>& table);

/// Worker count: min(hardware, GAZEKIT_THREADS) with at least one.
unsigned resolve_thread_count();

}  // namespace gazekit
