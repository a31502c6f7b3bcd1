#pragma once

#include "anapt/core.hpp"
#include "anapt/noise_models.hpp"
#include "anapt/persistence.hpp"

#include <algorithm>
#include <vector>

namespace anapt {

// Per-family constants of the compensation template R = exp(c1 (d/(d+L))^c2).
struct CompensationConstants {
  double c1 = 0;
  double c2 = 0;
};

inline CompensationConstants default_compensation(Family f) {
  switch (f) {
    case Family::gaussian: return {0.845, 0.809};
    case Family::uniform: return {0.880, 0.639};
    case Family::rayleigh: return {0.726, 0.605};
    case Family::exponential: return {0.436, 0.393};
  }
  return {};
}

// mu_L = rho_const * param for Gaussian/Rayleigh (param = sigma), delta/2 for
// Uniform, 3/(2 lambda) for Exponential; combined with the mean/median ratio
// rho these give the median-based parameter estimators below.
inline double estimate_parameter(Family family, double median_lifetime) {
  if (!(median_lifetime > 0)) throw DomainError("estimate_parameter: median lifetime must be > 0");
  switch (family) {
    case Family::gaussian: return 0.680 * median_lifetime;
    case Family::uniform: return 2.0 * median_lifetime;
    case Family::rayleigh: return 1.025 * median_lifetime;
    case Family::exponential: return 1.875 / median_lifetime;
  }
  return 0;
}

inline double cutoff_from_median(Family family, double median_lifetime, double alpha,
                                 Eigen::Index n) {
  const double param = estimate_parameter(family, median_lifetime);
  return cutoff(NoiseModel<double>::make(family, param), CutoffQuery{alpha, n});
}

template <class Scalar>
double median(std::vector<Scalar> v) {
  if (v.empty()) throw EmptyDiagram("median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = static_cast<double>(v[mid]);
  if (v.size() % 2 == 0) {
    const auto lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (static_cast<double>(lo) + hi) / 2.0;
  }
  return hi;
}

template <class Scalar>
double median_lifetime(const PersistenceDiagram<Scalar>& dgm) {
  if (dgm.pairs.empty()) throw EmptyDiagram("diagram has no finite pairs");
  std::vector<double> l;
  l.reserve(dgm.pairs.size());
  for (const auto& p : dgm.pairs) l.push_back(static_cast<double>(p.lifetime()));
  return median(std::move(l));
}

// delta ~ (2/n) * sum of lifetimes strictly exceeding the raw cutoff,
// n = sample count of the series.
template <class Container>
double estimate_delta(const Container& lifetimes, double raw_cutoff, Eigen::Index n) {
  if (n < 2) throw DomainError("estimate_delta: n must be >= 2");
  double sum = 0;
  for (const auto l : lifetimes)
    if (static_cast<double>(l) > raw_cutoff) sum += static_cast<double>(l);
  return 2.0 * sum / static_cast<double>(n);
}

inline double compensation_factor(double delta, double median_lifetime,
                                  const CompensationConstants& c) {
  if (delta < 0 || !(median_lifetime > 0) || !(c.c1 > 0) || !(c.c2 > 0))
    throw DomainError("compensation_factor: delta >= 0, L > 0, c1 > 0, c2 > 0 required");
  if (delta == 0) return 1.0;
  return std::exp(c.c1 * std::pow(delta / (delta + median_lifetime), c.c2));
}

// Full pipeline output.
struct CutoffReport {
  Family family = Family::gaussian;
  double alpha = 0.001;
  Eigen::Index n = 0;
  double median_lifetime = 0;
  double raw_param = 0;
  double raw_cutoff = 0;
  double delta = 0;
  double r_factor = 1;
  double compensated_param = 0;
  double compensated_cutoff = 0;
  std::vector<std::size_t> signal_pairs;  // indices into the diagram's pairs
  std::vector<std::size_t> noise_pairs;
  bool reliable = true;  // false when > 50% of pairs exceed the raw cutoff
};

template <class Scalar>
CutoffReport anapt_from_diagram(const PersistenceDiagram<Scalar>& dgm, Family family, double alpha,
                                const CompensationConstants& constants) {
  CutoffReport rep;
  rep.family = family;
  rep.alpha = alpha;
  rep.n = dgm.n_samples;
  rep.median_lifetime = median_lifetime(dgm);
  rep.raw_param = estimate_parameter(family, rep.median_lifetime);
  rep.raw_cutoff = cutoff(NoiseModel<double>::make(family, rep.raw_param),
                          CutoffQuery{alpha, dgm.n_samples});
  std::vector<double> l;
  for (const auto& p : dgm.pairs) l.push_back(static_cast<double>(p.lifetime()));
  rep.delta = estimate_delta(l, rep.raw_cutoff, dgm.n_samples);
  rep.r_factor = compensation_factor(rep.delta, rep.median_lifetime, constants);
  rep.compensated_param = rep.r_factor * rep.raw_param;
  rep.compensated_cutoff = rep.r_factor * rep.raw_cutoff;

  std::size_t above_raw = 0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] > rep.raw_cutoff) ++above_raw;
    (l[i] > rep.compensated_cutoff ? rep.signal_pairs : rep.noise_pairs).push_back(i);
  }
  rep.reliable = 2 * above_raw <= l.size();
  return rep;
}

template <class Scalar>
CutoffReport anapt(const TimeSeries<Scalar>& series, Family family, double alpha = 0.001,
                   const CompensationConstants* constants = nullptr) {
  const auto dgm = sublevel_persistence(series);
  return anapt_from_diagram(dgm, family, alpha,
                            constants ? *constants : default_compensation(family));
}

}  // namespace anapt
