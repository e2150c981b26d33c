#include "causalid/admg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "causalid/errors.hpp"

namespace causalid {

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const VertexSet& a, const VertexSet& b) {
  return set_intersection(a, b).empty();
}

BidirectedEdge make_bidirected(const VertexName& a, const VertexName& b) {
  return a < b ? BidirectedEdge{a, b} : BidirectedEdge{b, a};
}

std::string format_set(const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ", ";
    out += v;
    first = false;
  }
  return out + "}";
}

namespace {

void require_subset(const Admg& g, const VertexSet& s) {
  for (const auto& v : s) {
    if (!g.contains(v)) throw UnknownVertex("unknown vertex '" + v + "'");
  }
}

// Kahn's algorithm; the smallest ready name goes first.
std::vector<VertexName> topological_sort(const VertexSet& vertices,
                                         const std::set<DirectedEdge>& directed) {
  std::map<VertexName, int> indegree;
  std::map<VertexName, std::vector<VertexName>> out;
  for (const auto& v : vertices) indegree[v] = 0;
  for (const auto& [tail, head] : directed) {
    ++indegree[head];
    out[tail].push_back(head);
  }
  std::set<VertexName> ready;
  for (const auto& [v, d] : indegree) {
    if (d == 0) ready.insert(v);
  }
  std::vector<VertexName> order;
  order.reserve(vertices.size());
  while (!ready.empty()) {
    VertexName v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& w : out[v]) {
      if (--indegree[w] == 0) ready.insert(w);
    }
  }
  if (order.size() != vertices.size()) {
    throw CyclicGraph("directed part of the graph contains a cycle");
  }
  return order;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Admg::Admg(VertexSet vertices, std::set<DirectedEdge> directed,
           std::set<BidirectedEdge> bidirected)
    : vertices_(std::move(vertices)), directed_(std::move(directed)) {
  for (const auto& v : vertices_) {
    if (v.empty()) throw ParseError("empty vertex name");
  }
  for (const auto& [tail, head] : directed_) {
    if (tail == head) throw SelfLoop("self-loop on '" + tail + "'");
    if (!contains(tail)) throw UnknownVertex("unknown vertex '" + tail + "'");
    if (!contains(head)) throw UnknownVertex("unknown vertex '" + head + "'");
  }
  for (const auto& [a, b] : bidirected) {
    if (a == b) throw SelfLoop("bidirected self-loop on '" + a + "'");
    if (!contains(a)) throw UnknownVertex("unknown vertex '" + a + "'");
    if (!contains(b)) throw UnknownVertex("unknown vertex '" + b + "'");
    bidirected_.insert(make_bidirected(a, b));
  }
  topo_ = topological_sort(vertices_, directed_);
}

Admg::Admg(KeepOrder, VertexSet vertices, std::set<DirectedEdge> directed,
           std::set<BidirectedEdge> bidirected, std::vector<VertexName> topo)
    : vertices_(std::move(vertices)),
      directed_(std::move(directed)),
      bidirected_(std::move(bidirected)),
      topo_(std::move(topo)) {}

bool Admg::has_directed(const VertexName& tail, const VertexName& head) const {
  return directed_.count({tail, head}) != 0;
}

bool Admg::has_bidirected(const VertexName& a, const VertexName& b) const {
  return bidirected_.count(make_bidirected(a, b)) != 0;
}

VertexSet Admg::parents(const VertexName& v) const {
  VertexSet out;
  for (const auto& [tail, head] : directed_) {
    if (head == v) out.insert(tail);
  }
  return out;
}

VertexSet Admg::children(const VertexName& v) const {
  VertexSet out;
  auto it = directed_.lower_bound({v, std::string()});
  for (; it != directed_.end() && it->first == v; ++it) out.insert(it->second);
  return out;
}

VertexSet Admg::siblings(const VertexName& v) const {
  VertexSet out;
  for (const auto& [a, b] : bidirected_) {
    if (a == v) out.insert(b);
    if (b == v) out.insert(a);
  }
  return out;
}

bool operator==(const Admg& a, const Admg& b) {
  return a.vertices_ == b.vertices_ && a.directed_ == b.directed_ &&
         a.bidirected_ == b.bidirected_;
}

bool is_valid_vertex_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Admg parse_graph(std::span<const std::string> edge_specs) {
  if (edge_specs.empty()) throw ParseError("graph has no edges");
  VertexSet vertices;
  std::set<DirectedEdge> directed;
  std::set<BidirectedEdge> bidirected;
  for (const auto& raw : edge_specs) {
    std::string_view edge = trim(raw);
    bool is_bidirected = true;
    auto pos = edge.find("<->");
    std::size_t arrow_len = 3;
    if (pos == std::string_view::npos) {
      is_bidirected = false;
      pos = edge.find("->");
      arrow_len = 2;
    }
    if (pos == std::string_view::npos) {
      throw ParseError("malformed edge '" + std::string(edge) + "'");
    }
    std::string lhs(trim(edge.substr(0, pos)));
    std::string rhs(trim(edge.substr(pos + arrow_len)));
    if (!is_valid_vertex_name(lhs) || !is_valid_vertex_name(rhs)) {
      throw ParseError("malformed edge '" + std::string(edge) + "'");
    }
    if (lhs == rhs) throw SelfLoop("self-loop on '" + lhs + "'");
    vertices.insert(lhs);
    vertices.insert(rhs);
    if (is_bidirected) {
      bidirected.insert(make_bidirected(lhs, rhs));
    } else {
      directed.insert({lhs, rhs});
    }
  }
  return Admg(std::move(vertices), std::move(directed), std::move(bidirected));
}

Admg parse_graph_text(std::string_view text) {
  std::vector<std::string> specs;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream items(line);
    std::string item;
    while (std::getline(items, item, ',')) {
      auto t = trim(item);
      if (!t.empty()) specs.emplace_back(t);
    }
  }
  return parse_graph(specs);
}

Admg induced_subgraph(const Admg& g, const VertexSet& s) {
  require_subset(g, s);
  std::set<DirectedEdge> directed;
  for (const auto& e : g.directed()) {
    if (s.count(e.first) && s.count(e.second)) directed.insert(e);
  }
  std::set<BidirectedEdge> bidirected;
  for (const auto& e : g.bidirected()) {
    if (s.count(e.first) && s.count(e.second)) bidirected.insert(e);
  }
  std::vector<VertexName> topo;
  for (const auto& v : g.topological_order()) {
    if (s.count(v)) topo.push_back(v);
  }
  return Admg(Admg::KeepOrder{}, s, std::move(directed), std::move(bidirected),
              std::move(topo));
}

namespace {

VertexSet closure(const Admg& g, const VertexSet& s, bool upward) {
  require_subset(g, s);
  std::map<VertexName, std::vector<VertexName>> adj;
  for (const auto& [tail, head] : g.directed()) {
    if (upward) {
      adj[head].push_back(tail);
    } else {
      adj[tail].push_back(head);
    }
  }
  VertexSet seen = s;
  std::deque<VertexName> queue(s.begin(), s.end());
  while (!queue.empty()) {
    VertexName v = std::move(queue.front());
    queue.pop_front();
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return seen;
}

}  // namespace

VertexSet ancestors(const Admg& g, const VertexSet& s) { return closure(g, s, true); }

VertexSet descendants(const Admg& g, const VertexSet& s) { return closure(g, s, false); }

VertexSet root_set(const Admg& g) {
  VertexSet out = g.vertices();
  for (const auto& e : g.directed()) out.erase(e.first);
  return out;
}

Admg cut_incoming(const Admg& g, const VertexSet& x) {
  require_subset(g, x);
  std::set<DirectedEdge> directed;
  for (const auto& e : g.directed()) {
    if (!x.count(e.second)) directed.insert(e);
  }
  std::set<BidirectedEdge> bidirected;
  for (const auto& e : g.bidirected()) {
    if (!x.count(e.first) && !x.count(e.second)) bidirected.insert(e);
  }
  return Admg(Admg::KeepOrder{}, g.vertices(), std::move(directed), std::move(bidirected),
              g.topological_order());
}

Admg cut_outgoing(const Admg& g, const VertexSet& z) {
  require_subset(g, z);
  std::set<DirectedEdge> directed;
  for (const auto& e : g.directed()) {
    if (!z.count(e.first)) directed.insert(e);
  }
  return Admg(Admg::KeepOrder{}, g.vertices(), std::move(directed), g.bidirected(),
              g.topological_order());
}

std::vector<VertexSet> c_components(const Admg& g) {
  const auto& order = g.topological_order();
  std::map<VertexName, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i;

  std::vector<std::size_t> parent(order.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& [a, b] : g.bidirected()) {
    auto ra = find(index[a]);
    auto rb = find(index[b]);
    // Root is the member earliest in topological order.
    if (ra < rb) {
      parent[rb] = ra;
    } else if (rb < ra) {
      parent[ra] = rb;
    }
  }
  std::map<std::size_t, VertexSet> groups;
  for (std::size_t i = 0; i < order.size(); ++i) groups[find(i)].insert(order[i]);
  std::vector<VertexSet> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

bool is_subgraph(const Admg& g1, const Admg& g2) {
  if (!is_subset(g1.vertices(), g2.vertices())) return false;
  if (g1.directed().size() + g1.bidirected().size() >
      g2.directed().size() + g2.bidirected().size()) {
    return false;
  }
  return std::includes(g2.directed().begin(), g2.directed().end(),
                       g1.directed().begin(), g1.directed().end()) &&
         std::includes(g2.bidirected().begin(), g2.bidirected().end(),
                       g1.bidirected().begin(), g1.bidirected().end());
}

bool graphs_equal(const Admg& g1, const Admg& g2) {
  return is_subgraph(g1, g2) && is_subgraph(g2, g1);
}

VertexName latent_name(const VertexName& a, const VertexName& b) {
  auto [lo, hi] = make_bidirected(a, b);
  return "U[" + lo + "," + hi + "]";
}

Admg explicit_confounders(const Admg& g) {
  if (g.bidirected().empty()) return g;
  VertexSet vertices = g.vertices();
  std::set<DirectedEdge> directed = g.directed();
  for (const auto& [a, b] : g.bidirected()) {
    VertexName u = latent_name(a, b);
    if (!vertices.insert(u).second) {
      throw NameCollision("latent name '" + u + "' already used by a vertex");
    }
    directed.insert({u, a});
    directed.insert({u, b});
  }
  return Admg(std::move(vertices), std::move(directed), {});
}

VertexSet previous_in_order(const VertexName& v, const VertexSet& possible,
                            std::span<const VertexName> order) {
  auto it = std::find(order.begin(), order.end(), v);
  if (it == order.end()) throw UnknownVertex("vertex '" + v + "' not in ordering");
  VertexSet out;
  for (auto p = order.begin(); p != it; ++p) {
    if (possible.count(*p)) out.insert(*p);
  }
  return out;
}

std::string to_dot(const Admg& g) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (const auto& v : g.topological_order()) out << "  " << v << ";\n";
  for (const auto& [tail, head] : g.directed()) {
    out << "  " << tail << " -> " << head << ";\n";
  }
  for (const auto& [a, b] : g.bidirected()) {
    out << "  " << a << " -> " << b << " [dir=both, style=dashed];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace causalid
