#include "causalid/separation.hpp"

#include <deque>
#include <map>
#include <utility>

#include "causalid/errors.hpp"

namespace causalid {

namespace {

void check_query(const Admg& g, const VertexSet& xs, const VertexSet& ys,
                 const VertexSet& zs) {
  for (const auto* s : {&xs, &ys, &zs}) {
    for (const auto& v : *s) {
      if (!g.contains(v)) throw UnknownVertex("unknown vertex '" + v + "'");
    }
  }
  if (!disjoint(xs, ys)) throw OverlappingSets("xs and ys overlap");
  if (!disjoint(zs, set_union(xs, ys))) {
    throw OverlappingSets("conditioning set overlaps xs or ys");
  }
}

struct Adjacency {
  std::map<VertexName, std::vector<VertexName>> parents;
  std::map<VertexName, std::vector<VertexName>> children;
};

Adjacency adjacency(const Admg& g) {
  Adjacency adj;
  for (const auto& [tail, head] : g.directed()) {
    adj.children[tail].push_back(head);
    adj.parents[head].push_back(tail);
  }
  return adj;
}

void dfs_paths(const Admg& g, const Adjacency& adj, const VertexName& to, Path& current,
               VertexSet& on_path, std::vector<Path>& out) {
  const VertexName v = current.back();
  if (v == to) {
    out.push_back(current);
    return;
  }
  auto step = [&](const VertexName& w) {
    if (on_path.count(w)) return;
    on_path.insert(w);
    current.push_back(w);
    dfs_paths(g, adj, to, current, on_path, out);
    current.pop_back();
    on_path.erase(w);
  };
  if (auto it = adj.parents.find(v); it != adj.parents.end()) {
    for (const auto& w : it->second) step(w);
  }
  if (auto it = adj.children.find(v); it != adj.children.end()) {
    for (const auto& w : it->second) step(w);
  }
}

bool blocked_in(const Admg& expanded, const Path& p, const VertexSet& zs) {
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const auto& m = p[i];
    bool collider = expanded.has_directed(p[i - 1], m) && expanded.has_directed(p[i + 1], m);
    if (collider) {
      if (disjoint(descendants(expanded, {m}), zs)) return true;
    } else if (zs.count(m)) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool d_separated(const Admg& g, const VertexSet& xs, const VertexSet& ys,
                 const VertexSet& zs) {
  check_query(g, xs, ys, zs);
  const Admg h = explicit_confounders(g);
  const Adjacency adj = adjacency(h);
  const VertexSet anc_z = ancestors(h, zs);

  // Direction flag: true when v was entered from a child (travelling up).
  std::set<std::pair<VertexName, bool>> visited;
  std::deque<std::pair<VertexName, bool>> queue;
  for (const auto& x : xs) queue.emplace_back(x, true);
  auto push_all = [&](const std::map<VertexName, std::vector<VertexName>>& m,
                      const VertexName& v, bool up) {
    if (auto it = m.find(v); it != m.end()) {
      for (const auto& w : it->second) queue.emplace_back(w, up);
    }
  };
  while (!queue.empty()) {
    auto state = queue.front();
    queue.pop_front();
    if (!visited.insert(state).second) continue;
    const auto& [v, up] = state;
    bool observed = zs.count(v) != 0;
    if (!observed && ys.count(v)) return false;
    if (up) {
      if (!observed) {
        push_all(adj.parents, v, true);
        push_all(adj.children, v, false);
      }
    } else {
      if (!observed) push_all(adj.children, v, false);
      if (anc_z.count(v)) push_all(adj.parents, v, true);
    }
  }
  return true;
}

std::vector<Path> simple_paths(const Admg& g, const VertexName& from, const VertexName& to) {
  const Admg h = explicit_confounders(g);
  if (!h.contains(from)) throw UnknownVertex("unknown vertex '" + from + "'");
  if (!h.contains(to)) throw UnknownVertex("unknown vertex '" + to + "'");
  const Adjacency adj = adjacency(h);
  std::vector<Path> out;
  Path current{from};
  VertexSet on_path{from};
  dfs_paths(h, adj, to, current, on_path, out);
  return out;
}

bool d_separated_naive(const Admg& g, const VertexSet& xs, const VertexSet& ys,
                       const VertexSet& zs) {
  check_query(g, xs, ys, zs);
  const Admg h = explicit_confounders(g);
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      for (const auto& p : simple_paths(g, x, y)) {
        if (!blocked_in(h, p, zs)) return false;
      }
    }
  }
  return true;
}

bool path_blocked(const Admg& g, const Path& p, const VertexSet& zs) {
  const Admg h = explicit_confounders(g);
  if (p.size() < 2) throw InvalidPath("a path needs at least two vertices");
  VertexSet seen;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!h.contains(p[i])) throw InvalidPath("vertex '" + p[i] + "' not in graph");
    if (!seen.insert(p[i]).second) throw InvalidPath("vertex '" + p[i] + "' repeats");
    if (i > 0 && !h.has_directed(p[i - 1], p[i]) && !h.has_directed(p[i], p[i - 1])) {
      throw InvalidPath("no edge between '" + p[i - 1] + "' and '" + p[i] + "'");
    }
  }
  return blocked_in(h, p, zs);
}

}  // namespace causalid
