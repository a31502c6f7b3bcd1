#pragma once

#include "anapt/core.hpp"
#include "anapt/noise_models.hpp"

#include <cmath>
#include <string>

namespace anapt {

enum class SignalKind { wood1, wood2, wood3, quasiperiodic, lorenz_x, sinusoid };

inline SignalKind signal_kind_from_name(const std::string& s) {
  if (s == "wood1") return SignalKind::wood1;
  if (s == "wood2") return SignalKind::wood2;
  if (s == "wood3") return SignalKind::wood3;
  if (s == "quasiperiodic") return SignalKind::quasiperiodic;
  if (s == "lorenz_x") return SignalKind::lorenz_x;
  if (s == "sinusoid") return SignalKind::sinusoid;
  throw DomainError("unknown signal kind: " + s);
}

struct LorenzParams {
  double sigma_l = 10.0;
  double beta = 8.0 / 3.0;
  double rho_l = 181.0;
};

struct SignalSpec {
  SignalKind kind = SignalKind::sinusoid;
  double amplitude = 1.0;
  double t_a = 0.0;
  double t_b = 1.0;
  double sample_rate = 1.0;
  LorenzParams lorenz{};            // lorenz_x only
  double lorenz_duration = 200.0;   // seconds integrated before the kept tail
  Eigen::Index lorenz_keep = 2500;  // trailing samples returned

  void validate() const {
    if (!(t_b > t_a)) throw DomainError("signal domain requires t_b > t_a");
    if (!(sample_rate > 0)) throw DomainError("sample_rate must be positive");
  }
};

namespace detail {

template <class Scalar, class F>
TimeSeries<Scalar> tabulate(double t_a, double t_b, double rate, F&& f) {
  const auto n = static_cast<Eigen::Index>(std::llround((t_b - t_a) * rate)) + 1;
  TimeSeries<Scalar> out;
  out.sample_rate = rate;
  out.t0 = t_a;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.values[i] = static_cast<Scalar>(f(t_a + static_cast<double>(i) / rate));
  return out;
}

}  // namespace detail

// Fixed-step RK4 integration of the Lorenz system from (1, 1, 1); returns the
// last keep_last x-samples to skip the transient.
template <class Scalar = double>
TimeSeries<Scalar> lorenz_x(const LorenzParams& p, double sample_rate, double duration,
                            Eigen::Index keep_last) {
  if (!(sample_rate > 0) || !(duration > 0)) throw DomainError("lorenz_x: bad rate or duration");
  const auto steps = static_cast<Eigen::Index>(std::llround(duration * sample_rate));
  if (keep_last > steps) throw DomainError("lorenz_x: keep_last exceeds the integrated samples");

  const double dt = 1.0 / sample_rate;
  double s[3] = {1.0, 1.0, 1.0};
  auto deriv = [&](const double v[3], double out[3]) {
    out[0] = p.sigma_l * (v[1] - v[0]);
    out[1] = v[0] * (p.rho_l - v[2]) - v[1];
    out[2] = v[0] * v[1] - p.beta * v[2];
  };

  TimeSeries<Scalar> out;
  out.sample_rate = sample_rate;
  out.t0 = (static_cast<double>(steps - keep_last) + 1.0) * dt;
  out.values.resize(keep_last);
  double k1[3], k2[3], k3[3], k4[3], tmp[3];
  for (Eigen::Index step = 0; step < steps; ++step) {
    deriv(s, k1);
    for (int j = 0; j < 3; ++j) tmp[j] = s[j] + 0.5 * dt * k1[j];
    deriv(tmp, k2);
    for (int j = 0; j < 3; ++j) tmp[j] = s[j] + 0.5 * dt * k2[j];
    deriv(tmp, k3);
    for (int j = 0; j < 3; ++j) tmp[j] = s[j] + dt * k3[j];
    deriv(tmp, k4);
    for (int j = 0; j < 3; ++j) s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!(std::abs(s[0]) < 1e6 && std::abs(s[1]) < 1e6 && std::abs(s[2]) < 1e6))
      throw IntegrationOverflow("lorenz_x: trajectory diverged");
    const Eigen::Index kept = step - (steps - keep_last);
    if (kept >= 0) out.values[kept] = static_cast<Scalar>(s[0]);
  }
  return out;
}

template <class Scalar = double>
TimeSeries<Scalar> generate(const SignalSpec& spec) {
  spec.validate();
  const double A = spec.amplitude;
  switch (spec.kind) {
    case SignalKind::wood1:
      return detail::tabulate<Scalar>(spec.t_a, spec.t_b, spec.sample_rate,
                                      [&](double t) { return A * (t - t * t * t / 3.0); });
    case SignalKind::wood2:
      return detail::tabulate<Scalar>(spec.t_a, spec.t_b, spec.sample_rate, [&](double t) {
        return A * (std::sin(t) + std::sin(2.0 * t / 3.0));
      });
    case SignalKind::wood3:
      return detail::tabulate<Scalar>(spec.t_a, spec.t_b, spec.sample_rate, [&](double t) {
        double s = 0;
        for (int i = 1; i <= 5; ++i) s -= std::sin((i + 1) * t + i);
        return A * s;
      });
    case SignalKind::quasiperiodic:
      return detail::tabulate<Scalar>(spec.t_a, spec.t_b, spec.sample_rate, [&](double t) {
        return A * (std::sin(EIGEN_PI * t) + std::sin(t));
      });
    case SignalKind::sinusoid:
      return detail::tabulate<Scalar>(spec.t_a, spec.t_b, spec.sample_rate,
                                      [&](double t) { return A * std::sin(EIGEN_PI * t); });
    case SignalKind::lorenz_x: {
      auto s = lorenz_x<Scalar>(spec.lorenz, spec.sample_rate, spec.lorenz_duration,
                                spec.lorenz_keep);
      s.values *= static_cast<Scalar>(A);
      return s;
    }
  }
  throw DomainError("generate: unhandled signal kind");
}

// sigma = rms(signal - mean) * 10^(-snr_db / 20)
template <class Scalar>
double sigma_from_snr(const TimeSeries<Scalar>& signal, double snr_db) {
  signal.validate(2);
  const auto centered = signal.values.array() - signal.values.mean();
  const double rms = std::sqrt(centered.square().mean());
  if (!(rms > 0)) throw DegenerateSignal("sigma_from_snr: signal has zero variance");
  return rms * std::pow(10.0, -snr_db / 20.0);
}

template <class Scalar>
TimeSeries<Scalar> add_noise(const TimeSeries<Scalar>& signal, const NoiseModel<Scalar>& model,
                             std::uint64_t seed) {
  const auto noise = sample(model, signal.size(), seed, signal.sample_rate);
  TimeSeries<Scalar> out = signal;
  out.values += noise.values;
  return out;
}

}  // namespace anapt
