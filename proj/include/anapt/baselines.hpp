#pragma once

#include "anapt/bottleneck.hpp"
#include "anapt/core.hpp"
#include "anapt/persistence.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace anapt {

enum class PairLabel { noise, signal };

// Entropy-based separation: with p_i = l_i / sum(l) and perplexity
// P = exp(-sum p_i ln p_i), a pair is labeled signal iff p_i > 1/P.
template <class Scalar>
std::vector<PairLabel> persistent_entropy_separation(const PersistenceDiagram<Scalar>& dgm) {
  const std::size_t k = dgm.pairs.size();
  if (k < 2) throw EmptyDiagram("persistent_entropy_separation: need >= 2 finite pairs");
  double total = 0;
  for (const auto& p : dgm.pairs) total += static_cast<double>(p.lifetime());
  if (!(total > 0)) return std::vector<PairLabel>(k, PairLabel::noise);

  double entropy = 0;
  for (const auto& p : dgm.pairs) {
    const double pi = static_cast<double>(p.lifetime()) / total;
    if (pi > 0) entropy -= pi * std::log(pi);
  }
  const double inv_perplexity = std::exp(-entropy);
  std::vector<PairLabel> labels(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double pi = static_cast<double>(dgm.pairs[i].lifetime()) / total;
    labels[i] = pi > inv_perplexity ? PairLabel::signal : PairLabel::noise;
  }
  return labels;
}

// Frequency-domain Butterworth low-pass: forward real FFT, per-bin gain
// 1/sqrt(1 + (f/f_c)^{2 order}), inverse FFT; length preserved.
template <class Scalar>
TimeSeries<Scalar> butterworth_fft_filter(const TimeSeries<Scalar>& series, double cutoff_hz,
                                          int order) {
  series.validate(2);
  if (!(cutoff_hz > 0) || order < 1)
    throw DomainError("butterworth_fft_filter: need cutoff_hz > 0 and order >= 1");

  const Eigen::Index n = series.size();
  std::vector<double> in(series.values.data(), series.values.data() + n);
  if constexpr (!std::is_same_v<Scalar, double>) {
    for (Eigen::Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = series.values[i];
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);

  const double df = series.sample_rate / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double f = df * static_cast<double>(std::min(k, n - k));
    spec[static_cast<std::size_t>(k)] /=
        std::sqrt(1.0 + std::pow(f / cutoff_hz, 2.0 * order));
  }
  std::vector<double> rec;
  fft.inv(rec, spec);

  TimeSeries<Scalar> out = series;
  for (Eigen::Index i = 0; i < n; ++i)
    out.values[i] = static_cast<Scalar>(rec[static_cast<std::size_t>(i)]);
  return out;
}

// Dominant FFT frequency of the mean-removed signal, DC excluded.
template <class Scalar>
double dominant_frequency(const TimeSeries<Scalar>& series) {
  series.validate(4);
  const Eigen::Index n = series.size();
  std::vector<double> in(static_cast<std::size_t>(n));
  const double mean = series.values.mean();
  for (Eigen::Index i = 0; i < n; ++i)
    in[static_cast<std::size_t>(i)] = static_cast<double>(series.values[i]) - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  Eigen::Index best = 1;
  double best_mag = 0;
  for (Eigen::Index k = 1; k <= n / 2; ++k) {
    const double mag = std::abs(spec[static_cast<std::size_t>(k)]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return series.sample_rate * static_cast<double>(best) / static_cast<double>(n);
}

struct BootstrapConfig {
  int resamples = 1000;
  double percentile = 0.95;
  double filter_cutoff_hz = 0;  // <= 0: twice the dominant FFT frequency
  int filter_order = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (resamples < 1) throw DomainError("bootstrap: resamples must be >= 1");
    if (!(percentile > 0 && percentile < 1))
      throw DomainError("bootstrap: percentile must lie in (0, 1)");
  }
};

// Residual-resampling bootstrap threshold: low-pass fit s_hat, residuals
// eps = s_hat - x, N resamples x* = s_hat + eps* (endpoints held fixed),
// bottleneck distances to the original diagram, threshold = 2 * percentile.
template <class Scalar>
double bootstrap_cutoff(const TimeSeries<Scalar>& series, const BootstrapConfig& cfg) {
  cfg.validate();
  series.validate(4);
  const double fc =
      cfg.filter_cutoff_hz > 0 ? cfg.filter_cutoff_hz : 2.0 * dominant_frequency(series);
  const auto fitted = butterworth_fft_filter(series, fc, cfg.filter_order);
  const Vector<Scalar> resid = fitted.values - series.values;

  const auto base_dgm = sublevel_persistence(series);
  const Eigen::Index n = series.size();

  std::mt19937_64 gen(cfg.seed);
  std::vector<double> dists(static_cast<std::size_t>(cfg.resamples));
  TimeSeries<Scalar> re = series;
  for (int r = 0; r < cfg.resamples; ++r) {
    re.values = fitted.values;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const auto j = static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(n));
      re.values[i] += resid[j];
    }
    // End conditions held constant.
    re.values[0] = series.values[0];
    re.values[n - 1] = series.values[n - 1];
    dists[static_cast<std::size_t>(r)] =
        static_cast<double>(bottleneck_distance(base_dgm, sublevel_persistence(re)));
  }
  std::sort(dists.begin(), dists.end());
  const double pos = cfg.percentile * static_cast<double>(dists.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, dists.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return 2.0 * (dists[lo] * (1.0 - frac) + dists[hi] * frac);
}

template <class Scalar>
double lowpass_residual_sigma(const TimeSeries<Scalar>& series, double cutoff_hz, int order = 2) {
  series.validate(16);
  const auto fitted = butterworth_fft_filter(series, cutoff_hz, order);
  const Vector<Scalar> resid = series.values - fitted.values;
  const double m = resid.mean();
  return std::sqrt((resid.template cast<double>().array() - m).square().sum() /
                   static_cast<double>(resid.size() - 1));
}

namespace detail {

// First lag where the autocorrelation drops below 1/e.
template <class Scalar>
Eigen::Index acf_delay(const Vector<Scalar>& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd c = x.template cast<double>();
  c.array() -= c.mean();
  const double c0 = c.squaredNorm();
  if (!(c0 > 0)) return 1;
  for (Eigen::Index lag = 1; lag < n; ++lag) {
    const double r = c.head(n - lag).dot(c.tail(n - lag)) / c0;
    if (r < std::exp(-1.0)) return lag;
  }
  return n - 1;
}

// Natural cubic spline through (xs, ys) evaluated at integer query points;
// tridiagonal system solved by the Thomas algorithm.
inline Eigen::VectorXd natural_spline_eval(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                                           Eigen::Index n_query) {
  const Eigen::Index m = xs.size();
  Eigen::VectorXd h = xs.tail(m - 1) - xs.head(m - 1);

  // Solve for second-derivative coefficients c (natural: c[0] = c[m-1] = 0).
  Eigen::VectorXd a(m), b(m), cdiag(m), rhs(m);
  a.setZero();
  b.setOnes();
  cdiag.setZero();
  rhs.setZero();
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    a[i] = h[i - 1];
    b[i] = 2.0 * (h[i - 1] + h[i]);
    cdiag[i] = h[i];
    rhs[i] = 3.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
  }
  for (Eigen::Index i = 1; i < m; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * cdiag[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  Eigen::VectorXd c(m);
  c[m - 1] = rhs[m - 1] / b[m - 1];
  for (Eigen::Index i = m - 2; i >= 0; --i) c[i] = (rhs[i] - cdiag[i] * c[i + 1]) / b[i];

  Eigen::VectorXd out(n_query);
  Eigen::Index seg = 0;
  for (Eigen::Index q = 0; q < n_query; ++q) {
    const double t = static_cast<double>(q);
    while (seg + 2 < m && xs[seg + 1] <= t) ++seg;
    const double dx = t - xs[seg];
    const double bc = (ys[seg + 1] - ys[seg]) / h[seg] - h[seg] * (2.0 * c[seg] + c[seg + 1]) / 3.0;
    const double dc = (c[seg + 1] - c[seg]) / (3.0 * h[seg]);
    out[q] = ys[seg] + dx * (bc + dx * (c[seg] + dx * dc));
  }
  return out;
}

}  // namespace detail

// Downsample so the downsampled autocorrelation delay is ~2 (step =
// round(delay/2) of the full series), fit a natural cubic spline through the
// kept points, evaluate at every original sample, return the residual sd.
template <class Scalar>
double spline_residual_sigma(const TimeSeries<Scalar>& series) {
  series.validate(16);
  const Eigen::Index n = series.size();
  const Eigen::Index delay = detail::acf_delay(series.values);
  const Eigen::Index step = std::max<Eigen::Index>(1, (delay + 1) / 2);

  const Eigen::Index m = (n - 1) / step + 1;
  if (m < 4) throw SeriesTooShort("spline_residual_sigma: too few points after downsampling");
  Eigen::VectorXd xs(m), ys(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    xs[j] = static_cast<double>(j * step);
    ys[j] = static_cast<double>(series.values[j * step]);
  }
  const Eigen::VectorXd fit = detail::natural_spline_eval(xs, ys, n);
  Eigen::VectorXd resid = series.values.template cast<double>() - fit;
  const double mean = resid.mean();
  return std::sqrt((resid.array() - mean).square().sum() / static_cast<double>(n - 1));
}

}  // namespace anapt
