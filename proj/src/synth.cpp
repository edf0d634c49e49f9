// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#include "quicktap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "quicktap/error.hpp"
#include "quicktap/random.hpp"

namespace quicktap {

namespace {

constexpr double kMaxTravel = 0.03;
constexpr Micros kMinCompletion{15'000};
constexpr Micros kMaxCompletion{450'000};

struct UserTraits {
  double completion_log_offset;
  double contact_scale;
  double center_x;
  double center_y;
  double battery_probability;
};

class UserGenerator {
 public:
  UserGenerator(const SynthConfig& cfg, std::uint64_t seed)
      : cfg_(cfg), rng_(seed), period_(static_cast<long long>(std::llround(1e6 / cfg.effective_sampling_hz()))) {
    std::normal_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> center(0.3, 0.7);
    std::uniform_real_distribution<double> battery(0.0, 1.0);
    traits_.completion_log_offset = cfg.user_completion_log_sd * unit(rng_);
    traits_.contact_scale = std::exp(cfg.user_contact_log_sd * unit(rng_));
    traits_.center_x = center(rng_);
    traits_.center_y = center(rng_);
    traits_.battery_probability = battery(rng_);
  }

  // Appends one contact starting at `down_t` and returns its touch-up time.
  Micros emit_tap(Micros down_t, bool double_class, std::optional<std::pair<double, double>> near,
                  std::vector<TouchSample>& out) {
    std::normal_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    // Lognormal with the requested mean: mu = ln(mean) - sigma^2 / 2.
    const double sigma = cfg_.completion_sigma;
    const double log_gap =
        cfg_.separation * (std::log(cfg_.single_completion_mean_ms) -
                           std::log(cfg_.double_completion_mean_ms));
    double mu = std::log(cfg_.single_completion_mean_ms) - sigma * sigma / 2.0 +
                traits_.completion_log_offset;
    if (double_class) mu -= log_gap;
    const double completion_ms = std::exp(mu + sigma * unit(rng_));
    const Micros completion = std::clamp(Micros{std::llround(completion_ms * 1000.0)},
                                         kMinCompletion, kMaxCompletion);

    double contact_mean = cfg_.contact_mean * traits_.contact_scale;
    if (double_class) contact_mean *= 1.0 + cfg_.separation * cfg_.double_contact_gain;
    const double peak = std::max(
        0.0, contact_mean + cfg_.contact_sd * traits_.contact_scale * unit(rng_));

    const double travel_mean = double_class ? cfg_.separation * cfg_.double_travel_mean : 0.0;
    const double tx = std::clamp(travel_mean + cfg_.travel_sd * unit(rng_), -kMaxTravel, kMaxTravel);
    const double ty = std::clamp(travel_mean + cfg_.travel_sd * unit(rng_), -kMaxTravel, kMaxTravel);

    double x0;
    double y0;
    if (near) {
      x0 = near->first + 0.01 * unit(rng_);
      y0 = near->second + 0.01 * unit(rng_);
    } else {
      x0 = traits_.center_x + 0.1 * unit(rng_);
      y0 = traits_.center_y + 0.1 * unit(rng_);
    }
    x0 = std::clamp(x0, 0.05, 0.95);
    y0 = std::clamp(y0, 0.05, 0.95);
    const double x1 = std::clamp(x0 + tx, 0.0, 1.0);
    const double y1 = std::clamp(y0 + ty, 0.0, 1.0);
    const PowerSource power =
        uniform(rng_) < traits_.battery_probability ? PowerSource::kBattery : PowerSource::kAC;

    const auto sample_at = [&](Micros t, Phase phase) {
      const double frac =
          static_cast<double>((t - down_t).count()) / static_cast<double>(completion.count());
      // Contact swells toward mid-press and relaxes before lift-off.
      const double contact = peak * (0.75 + 0.25 * std::sin(std::numbers::pi * frac));
      return TouchSample{t, x0 + frac * (x1 - x0), y0 + frac * (y1 - y0), contact, phase, power};
    };
    out.push_back(sample_at(down_t, Phase::kDown));
    for (Micros t = down_t + period_; t < down_t + completion; t += period_) {
      out.push_back(sample_at(t, Phase::kMove));
    }
    out.push_back(sample_at(down_t + completion, Phase::kUp));
    last_up_xy_ = {x1, y1};
    return down_t + completion;
  }

  Micros draw_gap(Micros lo, Micros hi) {
    std::uniform_int_distribution<long long> gap(lo.count(), hi.count());
    return Micros{gap(rng_)};
  }

  bool draw_single() { return std::bernoulli_distribution(cfg_.single_fraction)(rng_); }

  std::pair<double, double> last_up_xy() const { return last_up_xy_; }

 private:
  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
  Micros period_;
  UserTraits traits_{};
  std::pair<double, double> last_up_xy_{0.5, 0.5};
};

}  // namespace

double SynthConfig::effective_sampling_hz() const {
  if (sampling_hz > 0.0) return sampling_hz;
  return profile == DeviceProfile::kLaptop ? 90.0 : 60.0;
}

void SynthConfig::validate() const {
  const auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (users < 1) fail("users must be at least 1");
  if (taps_per_user < 1) fail("taps_per_user must be at least 1");
  if (!(single_fraction > 0.0 && single_fraction < 1.0)) fail("single_fraction must lie in (0, 1)");
  if (sampling_hz < 0.0) fail("sampling_hz must be non-negative");
  if (!(separation >= 0.0)) fail("separation must be non-negative");
  if (!(single_completion_mean_ms > 0.0 && double_completion_mean_ms > 0.0)) {
    fail("completion means must be positive");
  }
  if (completion_sigma < 0.0 || contact_sd < 0.0 || travel_sd < 0.0 ||
      user_completion_log_sd < 0.0 || user_contact_log_sd < 0.0) {
    fail("spreads must be non-negative");
  }
  if (!(contact_mean > 0.0)) fail("contact_mean must be positive");
  if (double_contact_gain < 0.0) fail("double_contact_gain must be non-negative");
  if (double_gap_min.count() <= 0 || double_gap_min > double_gap_max ||
      double_gap_max >= double_tap_threshold) {
    fail("double gaps must satisfy 0 < min <= max < threshold");
  }
  if (idle_gap_min <= double_tap_threshold || idle_gap_min > idle_gap_max) {
    fail("idle gaps must exceed the double-tap threshold");
  }
}

std::vector<SynthUser> generate(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<SynthUser> users;
  users.reserve(static_cast<std::size_t>(cfg.users));
  for (int u = 0; u < cfg.users; ++u) {
    UserGenerator gen(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(u)));
    SynthUser user;
    user.user_id = u;
    std::vector<std::pair<TapLabel, TapRole>> planned;
    Micros t = gen.draw_gap(cfg.idle_gap_min, cfg.idle_gap_max);
    for (int k = 0; k < cfg.taps_per_user; ++k) {
      const bool single = gen.draw_single();
      Micros up = gen.emit_tap(t, !single, std::nullopt, user.stream);
      if (single) {
        planned.emplace_back(TapLabel::kSingle, TapRole::kPrimary);
      } else {
        planned.emplace_back(TapLabel::kDoubleFirst, TapRole::kPrimary);
        const Micros second_down = up + gen.draw_gap(cfg.double_gap_min, cfg.double_gap_max);
        up = gen.emit_tap(second_down, true, gen.last_up_xy(), user.stream);
        planned.emplace_back(TapLabel::kSingle, TapRole::kDoubleSecond);
      }
      t = up + gen.draw_gap(cfg.idle_gap_min, cfg.idle_gap_max);
    }

    user.taps = label_taps(segment_taps(user.stream), cfg.double_tap_threshold);
    if (user.taps.size() != planned.size()) {
      throw Error(ErrorCode::kValidation, "synthetic user " + std::to_string(u) +
                                              ": segmentation found " +
                                              std::to_string(user.taps.size()) + " taps, planted " +
                                              std::to_string(planned.size()));
    }
    for (std::size_t i = 0; i < planned.size(); ++i) {
      if (user.taps[i].label != planned[i].first || user.taps[i].role != planned[i].second) {
        throw Error(ErrorCode::kValidation,
                    "synthetic user " + std::to_string(u) + ": label mismatch at tap " +
                        std::to_string(i),
                    i);
      }
    }
    users.push_back(std::move(user));
  }
  return users;
}

}  // namespace quicktap
