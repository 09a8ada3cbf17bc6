#include "isingdiv/graphs.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "isingdiv/errors.hpp"

namespace isingdiv {

EdgeList path_graph(int n) {
  if (n < 1) throw InputError("path graph needs n >= 1");
  EdgeList edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return edges;
}

EdgeList cycle_graph(int n) {
  if (n < 3) throw InputError("cycle graph needs n >= 3");
  EdgeList edges = path_graph(n);
  edges.emplace_back(0, n - 1);
  return edges;
}

EdgeList complete_graph(int n) {
  if (n < 1) throw InputError("complete graph needs n >= 1");
  EdgeList edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return edges;
}

EdgeList petersen_graph() {
  EdgeList edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);          // outer cycle
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    edges.emplace_back(i, 5 + i);                // spokes
  }
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  return edges;
}

EdgeList random_graph(int n, double p, Rng& rng) {
  if (n < 1) throw InputError("random graph needs n >= 1");
  EdgeList edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_unit() < p) edges.emplace_back(u, v);
  return edges;
}

EdgeList random_regular_graph(int n, int delta, Rng& rng) {
  if (n < 1 || delta < 0) throw InputError("bad regular graph spec");
  if (delta >= n) throw InputError("regular graph needs delta < n");
  if ((static_cast<long long>(n) * delta) % 2 != 0) {
    throw InputError("regular graph needs n*delta even");
  }
  if (delta == 0) return {};

  constexpr int kMaxAttempts = 2000;
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(delta));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    stubs.clear();
    for (int v = 0; v < n; ++v)
      for (int d = 0; d < delta; ++d) stubs.push_back(v);
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
    }
    EdgeList edges;
    std::set<std::pair<int, int>> seen;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      if (!seen.emplace(u, v).second) {
        ok = false;
        break;
      }
      edges.emplace_back(u, v);
    }
    if (ok) {
      std::sort(edges.begin(), edges.end());
      return edges;
    }
  }
  throw InputError("could not realize a simple " + std::to_string(delta) + "-regular graph on " +
                   std::to_string(n) + " vertices");
}

}  // namespace isingdiv
