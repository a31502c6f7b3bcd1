#pragma once

#include "anapt/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>
#include <vector>

namespace anapt {

enum class ExtremumKind { min, max };

template <class Scalar>
struct Extremum {
  Eigen::Index index;  // index into the source series (first sample of a plateau run)
  Scalar height;       // +/-inf sentinel at the boundary
  ExtremumKind kind;
};

template <class Scalar>
using ExtremaList = std::vector<Extremum<Scalar>>;

// Interior local minima/maxima in index order, plateau runs collapsed to the
// run's first index. Boundary samples are always extrema of the piecewise
// linear interpolation; they carry sentinel heights -inf (min) / +inf (max)
// so that the boundary-born component outlives every interior one.
template <class Scalar>
ExtremaList<Scalar> extract_extrema(const TimeSeries<Scalar>& series) {
  series.validate(2);
  const auto& x = series.values;
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();

  // Collapse plateau runs.
  std::vector<Eigen::Index> run_first;
  std::vector<Scalar> run_val;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (run_val.empty() || x[i] != run_val.back()) {
      run_first.push_back(i);
      run_val.push_back(x[i]);
    }
  }

  ExtremaList<Scalar> out;
  const std::size_t m = run_val.size();
  if (m == 1) {  // constant series: one min sentinel, one max sentinel
    out.push_back({run_first[0], -inf, ExtremumKind::min});
    out.push_back({run_first[0], inf, ExtremumKind::max});
    return out;
  }
  // First run.
  out.push_back(run_val[0] < run_val[1] ? Extremum<Scalar>{run_first[0], -inf, ExtremumKind::min}
                                        : Extremum<Scalar>{run_first[0], inf, ExtremumKind::max});
  for (std::size_t j = 1; j + 1 < m; ++j) {
    if (run_val[j] < run_val[j - 1] && run_val[j] < run_val[j + 1])
      out.push_back({run_first[j], run_val[j], ExtremumKind::min});
    else if (run_val[j] > run_val[j - 1] && run_val[j] > run_val[j + 1])
      out.push_back({run_first[j], run_val[j], ExtremumKind::max});
  }
  // Last run.
  out.push_back(run_val[m - 1] < run_val[m - 2]
                    ? Extremum<Scalar>{run_first[m - 1], -inf, ExtremumKind::min}
                    : Extremum<Scalar>{run_first[m - 1], inf, ExtremumKind::max});
  return out;
}

// Theta(n log n) zero-dimensional sublevel-set persistence: keep the extrema
// in a doubly linked list and repeatedly pop the adjacent (min, max) pair with
// the smallest height gap from a priority queue (lazy deletion), record it as
// a persistence pair, splice it out, and re-key the newly adjacent neighbors.
template <class Scalar>
PersistenceDiagram<Scalar> sublevel_persistence(const TimeSeries<Scalar>& series) {
  series.validate(2);
  ExtremaList<Scalar> ext = extract_extrema(series);
  const int m = static_cast<int>(ext.size());

  PersistenceDiagram<Scalar> dgm;
  dgm.n_samples = series.size();
  // A boundary local minimum acts as a ray descending to -inf (its sentinel
  // height); that ray is the never-dying class. Otherwise the essential class
  // is born at the global minimum.
  if (ext.front().kind == ExtremumKind::min) {
    dgm.essential_birth = -std::numeric_limits<Scalar>::infinity();
    dgm.essential_birth_index = ext.front().index;
  } else if (ext.back().kind == ExtremumKind::min) {
    dgm.essential_birth = -std::numeric_limits<Scalar>::infinity();
    dgm.essential_birth_index = ext.back().index;
  } else {
    Eigen::Index argmin = 0;
    series.values.minCoeff(&argmin);
    dgm.essential_birth = series.values[argmin];
    dgm.essential_birth_index = argmin;
  }

  if (m <= 3) return dgm;

  std::vector<int> prev(m), next(m);
  std::vector<char> alive(m, 1);
  for (int i = 0; i < m; ++i) {
    prev[i] = i - 1;
    next[i] = i + 1;
  }

  const bool even_is_min = ext[0].kind == ExtremumKind::min;  // kinds alternate
  auto is_min = [&](int i) { return (i % 2 == 0) == even_is_min; };
  auto gap = [&](int a, int b) -> Scalar {
    if (!std::isfinite(ext[a].height) || !std::isfinite(ext[b].height))
      return std::numeric_limits<Scalar>::infinity();
    return std::abs(ext[a].height - ext[b].height);
  };
  // Equal-gap ties broken by the lower series index of the pair's minimum.
  auto tie_key = [&](int a, int b) -> std::uint32_t {
    return static_cast<std::uint32_t>(ext[is_min(a) ? a : b].index);
  };

  struct Entry {
    Scalar g;
    std::uint32_t tie;
    int a;  // left extremum; the partner is next[a] at pop time
  };
  auto entry_less = [](const Entry& x, const Entry& y) {
    return x.g != y.g ? x.g < y.g : x.tie < y.tie;
  };

  // Keys popped from the queue are monotone non-decreasing (a spliced-in gap
  // equals the sum of the two neighbors minus the popped gap, hence is never
  // smaller), so the priority queue splits into a pre-sorted static array
  // consumed sequentially plus a small heap of dynamically inserted entries.
  std::vector<Entry> fixed;
  fixed.reserve(static_cast<std::size_t>(m) - 1);
  for (int i = 0; i + 1 < m; ++i) {
    const Scalar g = gap(i, i + 1);
    if (std::isfinite(g)) fixed.push_back({g, tie_key(i, i + 1), i});
  }
  std::sort(fixed.begin(), fixed.end(), entry_less);
  auto entry_greater = [&](const Entry& x, const Entry& y) { return entry_less(y, x); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(entry_greater)> dyn(entry_greater);

  dgm.pairs.reserve(static_cast<std::size_t>(m - 3) / 2);
  std::size_t fi = 0;
  int count = m;
  while (count > 3) {
    Entry e;
    if (fi < fixed.size() && (dyn.empty() || entry_less(fixed[fi], dyn.top()))) {
      e = fixed[fi++];
    } else if (!dyn.empty()) {
      e = dyn.top();
      dyn.pop();
    } else {
      break;
    }
    const int a = e.a;
    if (!alive[a]) continue;
    const int b = next[a];
    if (b >= m || !alive[b] || gap(a, b) != e.g || tie_key(a, b) != e.tie) continue;  // stale

    const int mn = is_min(a) ? a : b;
    const int mx = mn == a ? b : a;
    dgm.pairs.push_back({ext[mn].height, ext[mx].height, ext[mn].index, ext[mx].index});

    alive[a] = alive[b] = 0;
    count -= 2;
    const int p = prev[a], q = next[b];
    next[p] = q;
    prev[q] = p;
    const Scalar ng = gap(p, q);
    if (std::isfinite(ng)) dyn.push({ng, tie_key(p, q), p});
  }
  return dgm;
}

namespace detail {

struct UnionFind {
  std::vector<Eigen::Index> parent;
  explicit UnionFind(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
};

}  // namespace detail

// O(n^2 log n)-class oracle: sweep thresholds through the sorted sample
// heights, maintain connected components with a union-find over indices, and
// apply the Elder Rule explicitly at every merge.
template <class Scalar>
PersistenceDiagram<Scalar> sublevel_persistence_bruteforce(const TimeSeries<Scalar>& series) {
  series.validate(2);
  const auto& x = series.values;
  const Eigen::Index n = x.size();
  if (n > 10000) throw OracleSizeExceeded("brute-force oracle limited to 10^4 samples");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return x[a] != x[b] ? x[a] < x[b] : a < b; });

  detail::UnionFind uf(n);
  std::vector<bool> active(static_cast<std::size_t>(n), false);
  std::vector<Scalar> birth(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> birth_idx(static_cast<std::size_t>(n));

  // Boundary local minima (after plateau collapse) are rays descending to
  // -inf: components born there are older than every interior component.
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  Eigen::Index second_run = 1;
  while (second_run < n && x[second_run] == x[0]) ++second_run;
  const bool left_ray = second_run >= n || x[0] < x[second_run];
  Eigen::Index last_prev = n - 2;
  while (last_prev >= 0 && x[last_prev] == x[n - 1]) --last_prev;
  const bool right_ray = last_prev < 0 ? false : x[n - 1] < x[last_prev];

  PersistenceDiagram<Scalar> dgm;
  dgm.n_samples = n;

  auto older = [&](Eigen::Index r, Eigen::Index s) {
    const auto a = static_cast<std::size_t>(r), b = static_cast<std::size_t>(s);
    if (birth[a] != birth[b]) return birth[a] < birth[b] ? r : s;
    return birth_idx[a] < birth_idx[b] ? r : s;  // tie: lower birth index is older
  };

  for (const Eigen::Index i : order) {
    const auto ui = static_cast<std::size_t>(i);
    active[ui] = true;
    birth[ui] = x[i];
    birth_idx[ui] = i;
    // Ray births attach to the first index of the boundary run, which is the
    // run's earliest activation under the (value, index) sweep order.
    if ((i == 0 && left_ray) || (i == last_prev + 1 && right_ray)) birth[ui] = -inf;
    const bool left = i > 0 && active[ui - 1];
    const bool right = i + 1 < n && active[ui + 1];
    if (left && right) {
      const Eigen::Index rl = uf.find(i - 1), rr = uf.find(i + 1);
      const Eigen::Index keep = older(rl, rr);
      const Eigen::Index die = keep == rl ? rr : rl;
      const Scalar die_birth = birth[static_cast<std::size_t>(die)];
      // Skip ray-ray merges (unbounded birth) and zero-lifetime merges at
      // tied heights (diagonal points, which diagrams omit).
      if (std::isfinite(die_birth) && die_birth < x[i])
        dgm.pairs.push_back({die_birth, x[i], birth_idx[static_cast<std::size_t>(die)], i});
      uf.parent[static_cast<std::size_t>(die)] = keep;
      uf.parent[ui] = keep;
    } else if (left) {
      uf.parent[ui] = uf.find(i - 1);
    } else if (right) {
      uf.parent[ui] = uf.find(i + 1);
    }
  }

  if (left_ray || right_ray) {
    dgm.essential_birth = -inf;
    dgm.essential_birth_index = left_ray ? 0 : last_prev + 1;  // first index of the boundary run
  } else {
    Eigen::Index argmin = 0;
    x.minCoeff(&argmin);
    dgm.essential_birth = x[argmin];
    dgm.essential_birth_index = argmin;
  }
  return dgm;
}

}  // namespace anapt
