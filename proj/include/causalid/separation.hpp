#pragma once

#include <vector>

#include "causalid/admg.hpp"

namespace causalid {

// A path in explicit_confounders(g): consecutive vertices share a directed
// edge in either orientation and no vertex repeats.
using Path = std::vector<VertexName>;

/// True iff zs blocks every path between xs and ys in the explicit-confounder
/// expansion of g. Reachability based, linear in the size of the graph.
///
/// Throws UnknownVertex, or OverlappingSets when xs meets ys or zs meets
/// either of them.
bool d_separated(const Admg& g, const VertexSet& xs, const VertexSet& ys,
                 const VertexSet& zs);

/// Same verdict as d_separated, computed by enumerating every simple path.
/// Exponential; meant as a reference for tests.
bool d_separated_naive(const Admg& g, const VertexSet& xs, const VertexSet& ys,
                       const VertexSet& zs);

// Throws InvalidPath if p is not a path of explicit_confounders(g).
bool path_blocked(const Admg& g, const Path& p, const VertexSet& zs);

// All simple paths from `from` to `to` in explicit_confounders(g).
std::vector<Path> simple_paths(const Admg& g, const VertexName& from, const VertexName& to);

}  // namespace causalid
