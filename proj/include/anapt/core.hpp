#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace anapt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeriesTooShort : Error {
  using Error::Error;
};
struct NonFiniteSample : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct EmptyDiagram : Error {
  using Error::Error;
};
struct OracleSizeExceeded : Error {
  using Error::Error;
};
struct DegenerateSignal : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct OptimizerDiverged : Error {
  using Error::Error;
};
struct IntegrationOverflow : Error {
  using Error::Error;
};

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Uniformly sampled real-valued signal.
template <class Scalar>
struct TimeSeries {
  Vector<Scalar> values;
  double sample_rate = 1.0;  // Hz
  double t0 = 0.0;           // seconds

  Eigen::Index size() const { return values.size(); }

  double time_at(Eigen::Index i) const { return t0 + static_cast<double>(i) / sample_rate; }

  void validate(Eigen::Index min_len = 2) const {
    if (sample_rate <= 0.0) throw DomainError("sample_rate must be positive");
    if (values.size() < min_len)
      throw SeriesTooShort("series length " + std::to_string(values.size()) +
                           " < " + std::to_string(min_len));
    if (!values.allFinite()) throw NonFiniteSample("series contains NaN or Inf");
  }
};

template <class Scalar>
struct PersistencePair {
  Scalar birth{};
  Scalar death{};
  Eigen::Index birth_index = -1;
  Eigen::Index death_index = -1;

  Scalar lifetime() const { return death - birth; }
};

// Multiset of finite (birth, death) pairs plus the one essential class,
// stored as a birth value only (death = +inf implied) and excluded from
// all lifetime statistics.
template <class Scalar>
struct PersistenceDiagram {
  std::vector<PersistencePair<Scalar>> pairs;
  Scalar essential_birth{};
  Eigen::Index essential_birth_index = -1;
  Eigen::Index n_samples = 0;
};

template <class Scalar>
Vector<Scalar> lifetimes(const PersistenceDiagram<Scalar>& dgm) {
  Vector<Scalar> out(static_cast<Eigen::Index>(dgm.pairs.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = dgm.pairs[static_cast<std::size_t>(i)].lifetime();
  return out;
}

}  // namespace anapt
