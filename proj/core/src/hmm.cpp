#include "gazekit/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

double gaussian_pdf(double x, const GaussianParams& params) {
  if (!(params.stddev > 0.0)) {
    raise(Errc::InvalidParameter,
          "gaussian_pdf requires stddev > 0, got " +
              std::to_string(params.stddev));
  }
  const double z = (x - params.mean) / params.stddev;
  return std::exp(-0.5 * z * z) /
         (params.stddev * std::sqrt(2.0 * std::numbers::pi));
}

std::array<GaussianParams, 2> estimate_gaussian_params(
    std::span<const double> features, std::span<const int> states) {
  if (features.size() != states.size()) {
    raise(Errc::Internal, "features/states length mismatch");
  }
  std::array<double, 2> sum{0.0, 0.0};
  std::array<std::size_t, 2> count{0, 0};
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int s = states[i];
    sum[static_cast<std::size_t>(s)] += features[i];
    ++count[static_cast<std::size_t>(s)];
  }
  for (int s = 0; s < 2; ++s) {
    if (count[static_cast<std::size_t>(s)] == 0) {
      raise(Errc::EmptyClass,
            "state " + std::to_string(s) + " has no assigned samples");
    }
  }

  std::array<GaussianParams, 2> out;
  std::array<double, 2> sq{0.0, 0.0};
  std::array<double, 2> mean{sum[0] / static_cast<double>(count[0]),
                             sum[1] / static_cast<double>(count[1])};
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto s = static_cast<std::size_t>(states[i]);
    const double d = features[i] - mean[s];
    sq[s] += d * d;
  }
  for (std::size_t s = 0; s < 2; ++s) {
    out[s].mean = mean[s];
    out[s].stddev =
        count[s] > 1
            ? std::sqrt(sq[s] / static_cast<double>(count[s] - 1))
            : 0.0;
    out[s].stddev = std::max(out[s].stddev, kStddevFloor);
  }
  return out;
}

TransitionMatrix count_transitions(std::span<const int> states,
                                   TransitionNormalization norm) {
  const std::size_t n = states.size();
  if (n < 2) {
    raise(Errc::InsufficientData,
          "transition counting needs a sequence of length >= 2");
  }
  std::array<std::array<double, 2>, 2> counts{{{0.0, 0.0}, {0.0, 0.0}}};
  for (std::size_t i = 1; i < n; ++i) {
    counts[static_cast<std::size_t>(states[i - 1])]
          [static_cast<std::size_t>(states[i])] += 1.0;
  }

  TransitionMatrix m;
  if (norm == TransitionNormalization::CountOverRecords) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        m(a, b) = counts[static_cast<std::size_t>(a)]
                        [static_cast<std::size_t>(b)] /
                  static_cast<double>(n);
  } else {
    for (int a = 0; a < 2; ++a) {
      const double row = counts[static_cast<std::size_t>(a)][0] +
                         counts[static_cast<std::size_t>(a)][1];
      for (int b = 0; b < 2; ++b)
        m(a, b) = row > 0.0 ? counts[static_cast<std::size_t>(a)]
                                    [static_cast<std::size_t>(b)] /
                                  row
                            : 0.0;
    }
  }
  return m;
}

bool apply_emission_floor_guard(std::array<double, 2>& column,
                                const NumericGuardConfig& guard) {
  if (!guard.enabled) return false;
  const double m = std::max(column[0], column[1]);
  if (m == 0.0) {
    column[0] = column[1] = guard.initial_reset_value;
    return true;
  }
  if (m >= guard.emission_lower_bound) return false;
  if (guard.literal_log10_rescale) {
    const double k = std::log10(m);
    column[0] *= k;
    column[1] *= k;
  } else {
    // Shared power-of-two scalar: exact multiplication, so the ratio of
    // the two entries is preserved bit-for-bit. Brings the max into
    // [0.5, 1).
    const int exponent = std::ilogb(m);
    const double scale = std::ldexp(1.0, -exponent - 1);
    column[0] *= scale;
    column[1] *= scale;
  }
  return true;
}

namespace {

// Raw densities -> zero-repair guards (a)/(b) -> normalization.
std::array<double, 2> observation_column(double x, const HmmModel& model) {
  std::array<double, 2> obs{gaussian_pdf(x, model.state_params[0]),
                            gaussian_pdf(x, model.state_params[1])};
  if (model.guard.enabled) {
    if (obs[0] == 0.0 && obs[1] == 0.0) {
      obs[0] = obs[1] = model.guard.initial_reset_value;
    } else if (obs[0] == 0.0) {
      obs[0] = model.guard.zero_reset_ratio * obs[1];
    } else if (obs[1] == 0.0) {
      obs[1] = model.guard.zero_reset_ratio * obs[0];
    }
  }
  const double sum = obs[0] + obs[1];
  if (sum > 0.0) {
    obs[0] /= sum;
    obs[1] /= sum;
  }
  return obs;
}

}  // namespace

DecodeResult viterbi_decode(std::span<const double> features,
                            const HmmModel& model) {
  const std::size_t n = features.size();
  if (n == 0) {
    raise(Errc::InsufficientData, "cannot decode an empty feature sequence");
  }

  std::vector<std::array<int, 2>> traceback(n, {0, 0});
  std::array<double, 2> emis = observation_column(features[0], model);
  double min_column_max = std::max(emis[0], emis[1]);

  for (std::size_t t = 1; t < n; ++t) {
    const std::array<double, 2> obs = observation_column(features[t], model);
    std::array<double, 2> next{};
    for (int s = 0; s < 2; ++s) {
      double best = emis[0] * model.transitions(0, s);
      int arg = 0;
      const double cand = emis[1] * model.transitions(1, s);
      if (cand > best) {
        best = cand;
        arg = 1;
      }
      next[static_cast<std::size_t>(s)] = best * obs[static_cast<std::size_t>(s)];
      traceback[t][static_cast<std::size_t>(s)] = arg;
    }
    apply_emission_floor_guard(next, model.guard);
    emis = next;
    min_column_max = std::min(min_column_max, std::max(emis[0], emis[1]));
  }

  DecodeResult result;
  result.min_column_max = min_column_max;
  int state = emis[1] > emis[0] ? 1 : 0;
  result.probability = emis[static_cast<std::size_t>(state)];
  result.states.resize(n);
  for (std::size_t t = n; t-- > 0;) {
    result.states[t] = state;
    if (t > 0) state = traceback[t][static_cast<std::size_t>(state)];
  }
  return result;
}

namespace {

bool has_both_states(std::span<const int> states) {
  bool seen0 = false, seen1 = false;
  for (int s : states) {
    if (s == 0) seen0 = true;
    else seen1 = true;
    if (seen0 && seen1) return true;
  }
  return false;
}

bool within_epsilons(const std::array<GaussianParams, 2>& a,
                     const std::array<GaussianParams, 2>& b,
                     const TransitionMatrix& ta, const TransitionMatrix& tb,
                     const ConvergenceConfig& conv) {
  for (std::size_t s = 0; s < 2; ++s) {
    if (std::abs(a[s].mean - b[s].mean) >= conv.epsilon_mean) return false;
    if (std::abs(a[s].stddev - b[s].stddev) >= conv.epsilon_stddev)
      return false;
  }
  for (int f = 0; f < 2; ++f)
    for (int t = 0; t < 2; ++t)
      if (std::abs(ta(f, t) - tb(f, t)) >= conv.epsilon_transition)
        return false;
  return true;
}

}  // namespace

RefineResult viterbi_refine(std::span<const double> features,
                            std::span<const int> initial_states,
                            const ConvergenceConfig& conv,
                            const NumericGuardConfig& guard,
                            TransitionNormalization norm) {
  if (features.size() != initial_states.size()) {
    raise(Errc::Internal, "features/states length mismatch");
  }
  RefineResult result;
  result.states.assign(initial_states.begin(), initial_states.end());
  if (conv.max_iterations < 0) {
    raise(Errc::InvalidParameter, "max_iterations must be >= 0");
  }
  if (conv.max_iterations == 0) return result;
  if (!has_both_states(result.states)) {
    raise(Errc::EmptyClass, "refinement seed must populate both states");
  }

  auto params = estimate_gaussian_params(features, result.states);
  auto trans = count_transitions(result.states, norm);

  for (int iter = 1; iter <= conv.max_iterations; ++iter) {
    HmmModel model{params, trans, guard};
    DecodeResult dec = viterbi_decode(features, model);
    result.iterations = iter;

    if (!has_both_states(dec.states)) {
      // Keep the previous labeling; the decode collapsed to one state.
      result.degenerated = true;
      return result;
    }
    auto new_params = estimate_gaussian_params(features, dec.states);
    auto new_trans = count_transitions(dec.states, norm);
    result.states = std::move(dec.states);

    if (within_epsilons(new_params, params, new_trans, trans, conv)) {
      result.converged = true;
      return result;
    }
    params = new_params;
    trans = new_trans;
  }
  return result;
}

}  // namespace gazekit
