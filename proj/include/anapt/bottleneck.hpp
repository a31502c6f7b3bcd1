#pragma once

#include "anapt/core.hpp"

#include <algorithm>
#include <vector>

namespace anapt {

namespace detail {

// Kuhn's augmenting-path maximum bipartite matching over an adjacency list.
inline int max_matching(const std::vector<std::vector<int>>& adj, int n_right) {
  const int n_left = static_cast<int>(adj.size());
  std::vector<int> match_right(static_cast<std::size_t>(n_right), -1);
  std::vector<char> used;
  int matched = 0;

  std::vector<int> stack;
  auto try_kuhn = [&](auto&& self, int u) -> bool {
    for (const int v : adj[static_cast<std::size_t>(u)]) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = 1;
      if (match_right[static_cast<std::size_t>(v)] < 0 ||
          self(self, match_right[static_cast<std::size_t>(v)])) {
        match_right[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    return false;
  };

  for (int u = 0; u < n_left; ++u) {
    used.assign(static_cast<std::size_t>(n_right), 0);
    if (try_kuhn(try_kuhn, u)) ++matched;
  }
  return matched;
}

template <class Scalar>
struct DgmPoint {
  Scalar b, d;
  Scalar pers() const { return d - b; }
};

template <class Scalar>
Scalar linf(const DgmPoint<Scalar>& p, const DgmPoint<Scalar>& q) {
  return std::max(std::abs(p.b - q.b), std::abs(p.d - q.d));
}

// A matching at radius r exists iff every point with persistence > 2r on each
// side can be injectively matched to a point on the other side within L-inf
// distance r (all remaining points can take the diagonal; the two one-sided
// matchings combine by Mendelsohn-Dulmage).
template <class Scalar>
bool feasible(const std::vector<DgmPoint<Scalar>>& A, const std::vector<DgmPoint<Scalar>>& B,
              Scalar r) {
  auto one_side = [&](const std::vector<DgmPoint<Scalar>>& from,
                      const std::vector<DgmPoint<Scalar>>& to) {
    std::vector<std::vector<int>> adj;
    for (const auto& p : from) {
      if (!(p.pers() > 2 * r)) continue;
      adj.emplace_back();
      for (int j = 0; j < static_cast<int>(to.size()); ++j)
        if (linf(p, to[static_cast<std::size_t>(j)]) <= r) adj.back().push_back(j);
    }
    return max_matching(adj, static_cast<int>(to.size())) == static_cast<int>(adj.size());
  };
  return one_side(A, B) && one_side(B, A);
}

}  // namespace detail

// Exact bottleneck distance between the finite parts of two diagrams: binary
// search over the candidate radii (all pairwise L-inf distances and all
// half-persistences) with a matching feasibility test. Points may match the
// diagonal at cost persistence/2.
template <class Scalar>
Scalar bottleneck_distance(const PersistenceDiagram<Scalar>& dgm_a,
                           const PersistenceDiagram<Scalar>& dgm_b) {
  using P = detail::DgmPoint<Scalar>;
  std::vector<P> A, B;
  for (const auto& p : dgm_a.pairs) A.push_back({p.birth, p.death});
  for (const auto& p : dgm_b.pairs) B.push_back({p.birth, p.death});

  std::vector<Scalar> cand{Scalar(0)};
  for (const auto& p : A) cand.push_back(p.pers() / 2);
  for (const auto& p : B) cand.push_back(p.pers() / 2);
  for (const auto& p : A)
    for (const auto& q : B) cand.push_back(detail::linf(p, q));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // Binary search for the smallest feasible candidate.
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (detail::feasible(A, B, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

}  // namespace anapt
