#include "gazekit/tuning.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "gazekit/error.hpp"
#include "gazekit/io.hpp"

namespace gazekit {

GridSpec GridSpec::defaults() {
  GridSpec g;
  for (int v = 70; v <= 150; v += 5) {
    g.velocity_grid.push_back(static_cast<double>(v));
  }
  for (int d = 1; d <= 20; ++d) {
    g.dispersion_grid.push_back(static_cast<double>(d) / 10.0);
  }
  g.duration_ms = 150.0;
  return g;
}

double objective(const ScoreReport& report, const ScoreReport& ideals,
                 const WeightVector& weights) {
  const std::array<double, 7> r{report.fqns,  report.sqns,   report.pqns,
                                report.misfix, report.fqls,  report.pqls_p,
                                report.pqls_v};
  const std::array<double, 7> i{ideals.fqns,  ideals.sqns,   ideals.pqns,
                                ideals.misfix, ideals.fqls,  ideals.pqls_p,
                                ideals.pqls_v};
  const std::array<double, 7> w = weights.as_array();
  double cost = 0.0;
  for (std::size_t k = 0; k < 7; ++k) {
    if (std::isnan(r[k]) || std::isnan(i[k])) {
      raise(Errc::UndefinedScore, "objective over an undefined score");
    }
    cost += w[k] * std::abs(r[k] - i[k]);
  }
  return cost;
}

unsigned resolve_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GAZEKIT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < n) {
      n = static_cast<unsigned>(cap);
    }
  }
  return n;
}

GridSearchResult grid_search(std::span<const AlignedData> recordings,
                             const GridSpec& grid, const WeightVector& weights,
                             const Classifier& classifier,
                             const ScoreOptions& options) {
  if (recordings.empty()) {
    raise(Errc::InsufficientData, "grid search needs at least one recording");
  }
  if (grid.velocity_grid.empty() || grid.dispersion_grid.empty()) {
    raise(Errc::InvalidParameter, "grids must be non-empty");
  }
  for (const auto& rec : recordings) {
    if (!rec.stimulus) {
      raise(Errc::InsufficientData,
            "grid search recordings must carry a stimulus track");
    }
  }

  // Ideal scores depend only on the stimulus; compute them once.
  std::vector<ScoreReport> ideals;
  ideals.reserve(recordings.size());
  for (const auto& rec : recordings) {
    ideals.push_back(ideal_scores(*rec.stimulus, options.latency));
  }

  const std::size_t n_cells =
      grid.velocity_grid.size() * grid.dispersion_grid.size();
  std::vector<GridCell> table(n_cells);
  const double infeasible = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto evaluate_cell = [&](std::size_t cell) {
    const std::size_t vi = cell / grid.dispersion_grid.size();
    const std::size_t di = cell % grid.dispersion_grid.size();
    GridCell& out = table[cell];
    out.velocity_dps = grid.velocity_grid[vi];
    out.dispersion_deg = grid.dispersion_grid[di];
    const ThresholdSet thresholds{out.velocity_dps, out.dispersion_deg,
                                  grid.duration_ms};

    double cost_sum = 0.0;
    std::array<double, 7> score_sum{};
    try {
      for (std::size_t r = 0; r < recordings.size(); ++r) {
        const auto labels = classifier(recordings[r].recording, thresholds);
        const ScoreReport rep = score_all(labels, *recordings[r].stimulus,
                                          recordings[r].recording, options);
        cost_sum += objective(rep, ideals[r], weights);
        const std::array<double, 7> s{rep.fqns,   rep.sqns,   rep.pqns,
                                      rep.misfix, rep.fqls,   rep.pqls_p,
                                      rep.pqls_v};
        for (std::size_t k = 0; k < 7; ++k) score_sum[k] += s[k];
      }
    } catch (const Error& e) {
      if (e.code() != Errc::UndefinedScore) throw;
      out.cost = infeasible;
      out.mean_scores = {nan, nan, nan, nan, nan, nan, nan, 0.0};
      return;
    }
    const auto count = static_cast<double>(recordings.size());
    out.cost = cost_sum / count;
    out.mean_scores = {score_sum[0] / count, score_sum[1] / count,
                       score_sum[2] / count, score_sum[3] / count,
                       score_sum[4] / count, score_sum[5] / count,
                       score_sum[6] / count, 0.0};
  };

  const unsigned workers =
      std::min<unsigned>(resolve_thread_count(),
                         static_cast<unsigned>(n_cells));
  if (workers <= 1) {
    for (std::size_t cell = 0; cell < n_cells; ++cell) evaluate_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t cell = next.fetch_add(1);
          if (cell >= n_cells) return;
          try {
            evaluate_cell(cell);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // Argmin in grid order; strict comparison keeps the first (smallest
  // velocity, then smallest dispersion) of any tie.
  std::size_t best = n_cells;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    if (std::isinf(table[cell].cost)) continue;
    if (best == n_cells || table[cell].cost < table[best].cost) best = cell;
  }
  if (best == n_cells) {
    raise(Errc::NoFeasibleThreshold, "every grid cell was infeasible");
  }

  GridSearchResult result;
  result.best = ThresholdSet{table[best].velocity_dps,
                             table[best].dispersion_deg, grid.duration_ms};
  result.best_cost = table[best].cost;
  result.table = std::move(table);
  return result;
}

void write_cost_table_csv(std::ostream& out,
                          const std::vector<GridCell>& table) {
  out << "vt,dt,cost,fqns,sqns,pqns,misfix,fqls,pqls_p,pqls_v\n";
  for (const auto& cell : table) {
    out << format_double(cell.velocity_dps) << ','
        << format_double(cell.dispersion_deg) << ','
        << format_double(cell.cost) << ','
        << format_double(cell.mean_scores.fqns) << ','
        << format_double(cell.mean_scores.sqns) << ','
        << format_double(cell.mean_scores.pqns) << ','
        << format_double(cell.mean_scores.misfix) << ','
        << format_double(cell.mean_scores.fqls) << ','
        << format_double(cell.mean_scores.pqls_p) << ','
        << format_double(cell.mean_scores.pqls_v) << "\n";
  }
}

}  // namespace gazekit
