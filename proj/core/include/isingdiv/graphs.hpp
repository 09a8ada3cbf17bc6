#pragma once

#include <utility>
#include <vector>

#include "isingdiv/rng.hpp"

namespace isingdiv {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList path_graph(int n);
EdgeList cycle_graph(int n);
EdgeList complete_graph(int n);
EdgeList petersen_graph();  // n = 10, 3-regular

/// Erdos-Renyi G(n, p).
EdgeList random_graph(int n, double p, Rng& rng);

/// Random delta-regular simple graph via the configuration model with
/// rejection of self-loops and parallel edges. Throws InputError when the
/// degree sequence is infeasible or pairing keeps failing.
EdgeList random_regular_graph(int n, int delta, Rng& rng);

}  // namespace isingdiv
