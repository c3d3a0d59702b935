#include <algorithm>
#include <cmath>
#include <deque>

#include "gazekit/classifiers.hpp"
#include "gazekit/error.hpp"
#include "gazekit/kinematics.hpp"

namespace gazekit {

namespace {

constexpr double kPriorFloor = 0.05;

// Online mean/stddev of velocities currently believed to be fixations.
struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  double stddev() const {
    return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  }
};

}  // namespace

std::array<double, 3> ibdt_posterior(const std::array<double, 3>& likelihood,
                                     const std::array<double, 3>& prior) {
  std::array<double, 3> post{};
  double sum = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    post[c] = likelihood[c] * prior[c];
    sum += post[c];
  }
  if (sum <= 0.0) {
    // Nothing is likely under any class; fall back to the priors.
    post = prior;
    sum = prior[0] + prior[1] + prior[2];
  }
  for (double& p : post) p /= sum;
  return post;
}

LabelSequence classify_ibdt(const GazeRecording& recording,
                            const IbdtConfig& config) {
  if (!config.valid()) {
    raise(Errc::InvalidParameter, "invalid I-BDT configuration");
  }
  const auto& samples = recording.samples;
  const std::size_t n = samples.size();
  if (n >= 2 &&
      samples.back().timestamp_ms - samples.front().timestamp_ms <
          config.temporal_window_ms) {
    raise(Errc::InsufficientData,
          "recording shorter than the temporal window");
  }
  const auto velocities = compute_velocities(recording);

  LabelSequence labels(n, Label::Fixation);
  std::vector<std::array<double, 3>> posteriors(n);
  RunningStats fixation_velocity;

  // Trailing window bookkeeping: indices in [win_begin, i].
  std::size_t win_begin = 0;

  for (std::size_t i = 0; i < n; ++i) {
    while (samples[i].timestamp_ms - samples[win_begin].timestamp_ms >
           config.temporal_window_ms) {
      ++win_begin;
    }
    const bool full_window =
        samples[i].timestamp_ms - samples[0].timestamp_ms >=
        config.temporal_window_ms;

    double fixation_threshold = 0.0;
    switch (config.fixation_threshold_mode) {
      case FixationThresholdMode::Zero:
        fixation_threshold = 0.0;
        break;
      case FixationThresholdMode::Mean:
        fixation_threshold = fixation_velocity.mean;
        break;
      case FixationThresholdMode::MeanPlusKSigma:
        fixation_threshold =
            fixation_velocity.mean + config.k_sigma * fixation_velocity.stddev();
        break;
    }

    // Movement ratio: fraction of the trailing window moving faster than
    // the fixation threshold.
    std::size_t moving = 0;
    for (std::size_t j = win_begin; j <= i; ++j) {
      if (velocities[j] > fixation_threshold) ++moving;
    }
    const double ratio =
        static_cast<double>(moving) / static_cast<double>(i - win_begin + 1);

    const double v = velocities[i];
    const double sub_saccadic =
        1.0 - std::min(1.0, v / config.saccade_threshold_dps);
    const std::array<double, 3> likelihood{
        sub_saccadic * (1.0 - ratio),                      // Fixation
        std::min(1.0, v / config.saccade_threshold_dps),   // Saccade
        sub_saccadic * ratio,                              // SmoothPursuit
    };

    std::array<double, 3> prior{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    if (full_window && i > win_begin) {
      std::array<double, 3> acc{0.0, 0.0, 0.0};
      for (std::size_t j = win_begin; j < i; ++j) {
        for (std::size_t c = 0; c < 3; ++c) acc[c] += posteriors[j][c];
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        prior[c] = std::max(acc[c] / static_cast<double>(i - win_begin),
                            kPriorFloor);
        sum += prior[c];
      }
      for (double& p : prior) p /= sum;
    }

    posteriors[i] = ibdt_posterior(likelihood, prior);
    const auto best =
        std::max_element(posteriors[i].begin(), posteriors[i].end());
    const auto cls = static_cast<std::size_t>(best - posteriors[i].begin());
    labels[i] = cls == 0   ? Label::Fixation
                : cls == 1 ? Label::Saccade
                           : Label::SmoothPursuit;
    if (labels[i] == Label::Fixation) fixation_velocity.add(v);
  }
  return labels;
}

}  // namespace gazekit
