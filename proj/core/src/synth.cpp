#include "gazekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "gazekit/error.hpp"
#include "gazekit/motion_model.hpp"
#include "gazekit/scores.hpp"

namespace gazekit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Vec {
  double x = 0.0;
  double y = 0.0;

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y}; }
  Vec operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

Vec unit(double direction_deg) {
  return {std::cos(direction_deg * kDegToRad),
          std::sin(direction_deg * kDegToRad)};
}

// Platform-stable gaussian draws: explicit Box-Muller over uniform bits
// so identical seeds give identical bytes regardless of the standard
// library's distribution implementation.
class NoiseSource {
public:
  explicit NoiseSource(std::uint64_t seed) : gen_(seed) {}

  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 gen_;
};

// Minimum-jerk position easing, s(0)=0, s(1)=1, peak rate 1.875 at 1/2.
double minimum_jerk(double tau) {
  tau = std::clamp(tau, 0.0, 1.0);
  const double t3 = tau * tau * tau;
  return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

}  // namespace

StimulusSpec default_stimulus_spec() {
  StimulusSpec spec;
  spec.rate_hz = 1000.0;
  auto fix = [](double ms) { return FixationSegment{ms, {}, {}}; };
  spec.segments = {
      FixationSegment{800.0, -8.0, -2.0},
      StepSegment{6.0, 0.0},
      fix(800.0),
      RampSegment{343.0, 10.0, 45.0},
      fix(800.0),
      StepSegment{7.0, 90.0},
      fix(800.0),
      RampSegment{343.0, 10.0, 225.0},
      fix(800.0),
      StepSegment{8.0, 180.0},
      fix(800.0),
      RampSegment{343.0, 10.0, 315.0},
      fix(800.0),
      StepSegment{7.0, 270.0},
      fix(800.0),
      RampSegment{343.0, 10.0, 0.0},
      fix(800.0),
      StepSegment{6.0, 90.0},
      fix(849.0),
  };
  return spec;
}

StimulusTrack generate_stimulus(const StimulusSpec& spec) {
  if (spec.segments.empty()) {
    raise(Errc::InvalidSpec, "stimulus spec has no segments");
  }
  if (!(spec.rate_hz > 0.0)) {
    raise(Errc::InvalidSpec, "stimulus rate must be positive");
  }
  const double period = 1000.0 / spec.rate_hz;

  StimulusTrack track;
  Vec pos{0.0, 0.0};
  std::size_t index = 0;

  auto emit = [&](std::size_t count, Label intended, auto position_at) {
    for (std::size_t k = 0; k < count; ++k) {
      const Vec p = position_at(k);
      track.samples.push_back(
          {static_cast<double>(index) * period, p.x, p.y, intended});
      ++index;
    }
  };
  auto sample_count = [&](double duration_ms) {
    return static_cast<std::size_t>(
        std::llround(duration_ms * spec.rate_hz / 1000.0));
  };

  for (const auto& segment : spec.segments) {
    if (const auto* f = std::get_if<FixationSegment>(&segment)) {
      if (!(f->duration_ms > 0.0)) {
        raise(Errc::InvalidSpec, "fixation duration must be positive");
      }
      if (f->x) pos.x = *f->x;
      if (f->y) pos.y = *f->y;
      emit(sample_count(f->duration_ms), Label::Fixation,
           [&](std::size_t) { return pos; });
    } else if (const auto* s = std::get_if<StepSegment>(&segment)) {
      if (s->amplitude_deg == 0.0) {
        raise(Errc::InvalidSpec, "step amplitude must be nonzero");
      }
      const double amp = std::abs(s->amplitude_deg);
      const Vec target =
          pos + unit(s->direction_deg) * s->amplitude_deg;
      // The jump is instantaneous; the run marks the time a normal
      // response saccade of this amplitude occupies.
      emit(sample_count(saccade_duration_ms(amp)), Label::Saccade,
           [&](std::size_t) { return target; });
      pos = target;
    } else if (const auto* r = std::get_if<RampSegment>(&segment)) {
      if (!(r->duration_ms > 0.0) || !(r->speed_dps > 0.0)) {
        raise(Errc::InvalidSpec, "ramp duration and speed must be positive");
      }
      const Vec vel = unit(r->direction_deg) * (r->speed_dps / 1000.0);
      const std::size_t count = sample_count(r->duration_ms);
      const Vec start = pos;
      emit(count, Label::SmoothPursuit, [&](std::size_t k) {
        return start + vel * (static_cast<double>(k) * period);
      });
      pos = start + vel * (static_cast<double>(count) * period);
    }
  }
  if (track.samples.empty()) {
    raise(Errc::InvalidSpec, "stimulus spec produced no samples");
  }
  return track;
}

namespace {

// Piecewise description of what the simulated eye is doing.
struct Behavior {
  double t0 = 0.0;
  double t1 = 0.0;  // exclusive
  Label truth = Label::Fixation;
  // Saccade: minimum-jerk between endpoints over [t0, t1).
  // Pursue/overshoot: anchor position plus velocity * (t - t0).
  bool is_saccade = false;
  Vec from, to;
  Vec anchor, velocity;

  Vec position(double t) const {
    if (is_saccade) {
      const double tau = (t - t0) / std::max(t1 - t0, 1e-9);
      return from + (to - from) * minimum_jerk(tau);
    }
    return anchor + velocity * (t - t0);
  }
};

}  // namespace

SimulatedGaze simulate_gaze(const StimulusTrack& track,
                            const OculomotorSpec& ocu) {
  if (track.empty()) {
    raise(Errc::InvalidSpec, "cannot simulate over an empty track");
  }
  if (!(ocu.pursuit_latency_ms > 0.0) || ocu.noise_std_deg < 0.0 ||
      ocu.noise_time_constant_ms < 0.0) {
    raise(Errc::InvalidSpec, "invalid oculomotor parameters");
  }
  const auto& stim = track.samples;
  const std::size_t n = stim.size();
  const double period =
      n >= 2 ? (stim.back().timestamp_ms - stim.front().timestamp_ms) /
                   static_cast<double>(n - 1)
             : 1.0;
  const double latency = ocu.pursuit_latency_ms;
  const double t_begin = stim.front().timestamp_ms;
  const double t_past_end = stim.back().timestamp_ms + period;

  std::vector<Behavior> timeline;
  auto hold = [&](double t0, double t1, Vec at) {
    if (t1 <= t0) return;
    timeline.push_back({t0, t1, Label::Fixation, false, {}, {}, at, {}});
  };
  auto saccade = [&](double t0, double dur, Vec from, Vec to) {
    timeline.push_back(
        {t0, t0 + dur, Label::Saccade, true, from, to, {}, {}});
  };
  auto pursue = [&](double t0, double t1, Vec anchor, Vec vel, Label lbl) {
    if (t1 <= t0) return;
    timeline.push_back({t0, t1, lbl, false, {}, {}, anchor, vel});
  };

  Vec eye{stim.front().x, stim.front().y};
  double cursor = t_begin;

  const auto runs = intended_runs(track);
  for (const auto& run : runs) {
    if (run.label == Label::Fixation) continue;

    if (run.label == Label::Saccade) {
      const double t_step = stim[run.first].timestamp_ms;
      const double run_dur =
          static_cast<double>(run.last - run.first + 1) * period;
      const Vec target{stim[run.last].x, stim[run.last].y};
      const double amplitude = (target - eye).norm();
      // Shorten the response if the main-sequence duration would keep
      // the minimum-jerk peak under the requested peak velocity.
      double dur = run_dur;
      if (ocu.saccade_peak_velocity_dps > 0.0 && amplitude > 0.0) {
        dur = std::min(
            dur, 1000.0 * 1.875 * amplitude / ocu.saccade_peak_velocity_dps);
      }
      const double start = std::max(cursor, t_step + latency);
      hold(cursor, start, eye);
      saccade(start, dur, eye, target);
      eye = target;
      cursor = start + dur;
      continue;
    }

    // Ramp: target moves from the run's first position at constant
    // velocity until the run's time budget ends.
    const double t_ramp = stim[run.first].timestamp_ms;
    const double span =
        static_cast<double>(run.last - run.first) * period;
    const double t_end =
        t_ramp + static_cast<double>(run.last - run.first + 1) * period;
    const Vec ramp_start{stim[run.first].x, stim[run.first].y};
    const Vec ramp_last{stim[run.last].x, stim[run.last].y};
    const Vec vel = span > 0.0 ? (ramp_last - ramp_start) * (1.0 / span)
                               : Vec{0.0, 0.0};
    const double speed = vel.norm() * 1000.0;  // deg/s
    const Vec ramp_end = ramp_start + vel * (t_end - t_ramp);

    double pursuit_start = std::max(cursor, t_ramp + latency);
    if (ocu.catch_up_saccade && speed > 0.0) {
      const double d_catch = catch_up_saccade_duration_ms(speed, latency);
      hold(cursor, pursuit_start, eye);
      const double landing = std::min(pursuit_start + d_catch, t_end);
      const Vec landing_pos = ramp_start + vel * (landing - t_ramp);
      saccade(pursuit_start, d_catch, eye, landing_pos);
      pursuit_start += d_catch;
      // On-target pursuit from the landing point.
      pursue(pursuit_start, t_end, ramp_start + vel * (pursuit_start - t_ramp),
             vel, Label::SmoothPursuit);
      eye = ramp_end;
    } else {
      hold(cursor, pursuit_start, eye);
      // Lagging pursuit: same velocity, constant positional lag.
      pursue(pursuit_start, t_end, eye, vel, Label::SmoothPursuit);
      eye = eye + vel * (t_end - pursuit_start);
    }

    // Termination: the eye keeps moving for one latency past ramp end,
    // then a corrective saccade re-acquires the stopped target.
    const double spill_end = t_end + latency;
    pursue(t_end, spill_end, eye, vel, Label::SmoothPursuit);
    eye = eye + vel * latency;
    const double overshoot = (eye - ramp_end).norm();
    if (overshoot > 1e-9) {
      const double d_corr = saccade_duration_ms(overshoot);
      saccade(spill_end, d_corr, eye, ramp_end);
      cursor = spill_end + d_corr;
    } else {
      cursor = spill_end;
    }
    eye = ramp_end;
  }
  hold(cursor, t_past_end + latency, eye);

  SimulatedGaze out;
  out.recording.rate_hz = 1000.0 / period;
  out.recording.samples.resize(n);
  out.truth.resize(n);

  NoiseSource noise(ocu.seed);
  const double rho = ocu.noise_time_constant_ms > 0.0
                         ? std::exp(-period / ocu.noise_time_constant_ms)
                         : 0.0;
  const double innovation = ocu.noise_std_deg * std::sqrt(1.0 - rho * rho);
  double nx = ocu.noise_std_deg * noise.gaussian();
  double ny = ocu.noise_std_deg * noise.gaussian();

  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = stim[i].timestamp_ms;
    while (seg + 1 < timeline.size() && t >= timeline[seg].t1) ++seg;
    const Behavior& b = timeline[seg];
    const Vec p = b.position(t);
    if (i > 0) {
      nx = rho * nx + innovation * noise.gaussian();
      ny = rho * ny + innovation * noise.gaussian();
    }
    out.recording.samples[i] = {t, p.x + nx, p.y + ny, true};
    out.truth[i] = b.truth;
  }
  return out;
}

AlignedData synthesize(const StimulusSpec& spec, const OculomotorSpec& ocu) {
  AlignedData data;
  StimulusTrack track = generate_stimulus(spec);
  SimulatedGaze sim = simulate_gaze(track, ocu);
  data.recording = std::move(sim.recording);
  data.stimulus = std::move(track);
  data.truth = std::move(sim.truth);
  return data;
}

StimulusSpec stimulus_spec_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(Errc::InvalidSpec, "malformed stimulus spec JSON");
  }
  StimulusSpec spec;
  try {
    spec.rate_hz = j.value("rate_hz", 1000.0);
    for (const auto& s : j.at("segments")) {
      const std::string type = s.at("type").get<std::string>();
      if (type == "fixation") {
        FixationSegment f;
        f.duration_ms = s.at("duration_ms").get<double>();
        if (s.contains("x")) f.x = s.at("x").get<double>();
        if (s.contains("y")) f.y = s.at("y").get<double>();
        spec.segments.emplace_back(f);
      } else if (type == "step") {
        spec.segments.emplace_back(StepSegment{
            s.at("amplitude_deg").get<double>(),
            s.value("direction_deg", 0.0)});
      } else if (type == "ramp") {
        spec.segments.emplace_back(RampSegment{
            s.at("duration_ms").get<double>(),
            s.at("speed_dps").get<double>(),
            s.value("direction_deg", 0.0)});
      } else {
        raise(Errc::InvalidSpec, "unknown segment type \"" + type + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::InvalidSpec, std::string("stimulus spec JSON: ") + e.what());
  }
  if (spec.segments.empty()) {
    raise(Errc::InvalidSpec, "stimulus spec has no segments");
  }
  return spec;
}

std::string stimulus_spec_to_json(const StimulusSpec& spec) {
  nlohmann::ordered_json j;
  j["rate_hz"] = spec.rate_hz;
  j["segments"] = nlohmann::json::array();
  for (const auto& segment : spec.segments) {
    nlohmann::ordered_json s;
    if (const auto* f = std::get_if<FixationSegment>(&segment)) {
      s["type"] = "fixation";
      s["duration_ms"] = f->duration_ms;
      if (f->x) s["x"] = *f->x;
      if (f->y) s["y"] = *f->y;
    } else if (const auto* st = std::get_if<StepSegment>(&segment)) {
      s["type"] = "step";
      s["amplitude_deg"] = st->amplitude_deg;
      s["direction_deg"] = st->direction_deg;
    } else if (const auto* r = std::get_if<RampSegment>(&segment)) {
      s["type"] = "ramp";
      s["duration_ms"] = r->duration_ms;
      s["speed_dps"] = r->speed_dps;
      s["direction_deg"] = r->direction_deg;
    }
    j["segments"].push_back(s);
  }
  return j.dump(2) + "\n";
}

}  // namespace gazekit
