#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace causalid {

using VertexName = std::string;
using VertexSet = std::set<VertexName>;
// (tail, head)
using DirectedEdge = std::pair<VertexName, VertexName>;
// Unordered pair stored with first < second.
using BidirectedEdge = std::pair<VertexName, VertexName>;

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool disjoint(const VertexSet& a, const VertexSet& b);

BidirectedEdge make_bidirected(const VertexName& a, const VertexName& b);

/// Acyclic directed mixed graph.
///
/// Directed edges are causal arrows; bidirected edges stand for a latent
/// common cause of their two endpoints. The value is immutable once built
/// and caches a topological order of the directed part in which ties
/// between ready vertices are broken by the lexicographically smallest name.
class Admg {
 public:
  Admg() = default;

  // Throws SelfLoop, UnknownVertex (edge endpoint outside `vertices`) or
  // CyclicGraph.
  Admg(VertexSet vertices, std::set<DirectedEdge> directed,
       std::set<BidirectedEdge> bidirected);

  const VertexSet& vertices() const { return vertices_; }
  const std::set<DirectedEdge>& directed() const { return directed_; }
  const std::set<BidirectedEdge>& bidirected() const { return bidirected_; }
  const std::vector<VertexName>& topological_order() const { return topo_; }

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool contains(const VertexName& v) const { return vertices_.count(v) != 0; }
  bool has_directed(const VertexName& tail, const VertexName& head) const;
  bool has_bidirected(const VertexName& a, const VertexName& b) const;

  VertexSet parents(const VertexName& v) const;
  VertexSet children(const VertexName& v) const;
  // Endpoints joined to v by a bidirected edge.
  VertexSet siblings(const VertexName& v) const;

  friend bool operator==(const Admg& a, const Admg& b);

 private:
  struct KeepOrder {};
  Admg(KeepOrder, VertexSet vertices, std::set<DirectedEdge> directed,
       std::set<BidirectedEdge> bidirected, std::vector<VertexName> topo);

  friend Admg induced_subgraph(const Admg& g, const VertexSet& s);
  friend Admg cut_incoming(const Admg& g, const VertexSet& x);
  friend Admg cut_outgoing(const Admg& g, const VertexSet& z);

  VertexSet vertices_;
  std::set<DirectedEdge> directed_;
  std::set<BidirectedEdge> bidirected_;
  std::vector<VertexName> topo_;
};

bool is_valid_vertex_name(std::string_view name);

// Each entry is `A->B` or `A<->B`, surrounding whitespace ignored.
// Throws ParseError, SelfLoop, CyclicGraph.
Admg parse_graph(std::span<const std::string> edge_specs);

// Graph text format: edges separated by newlines and/or commas, `#` starts
// a comment running to the end of the line.
Admg parse_graph_text(std::string_view text);

// Topological order is inherited from g, not recomputed.
Admg induced_subgraph(const Admg& g, const VertexSet& s);

VertexSet ancestors(const Admg& g, const VertexSet& s);
VertexSet descendants(const Admg& g, const VertexSet& s);
VertexSet root_set(const Admg& g);

/// Removes directed edges into x and bidirected edges touching x.
Admg cut_incoming(const Admg& g, const VertexSet& x);
/// Removes directed edges out of z. Bidirected edges are not outgoing.
Admg cut_outgoing(const Admg& g, const VertexSet& z);

// Maximal C-components, ordered by their first member in topological order.
std::vector<VertexSet> c_components(const Admg& g);

bool is_subgraph(const Admg& g1, const Admg& g2);
bool graphs_equal(const Admg& g1, const Admg& g2);

// Canonical name of the latent standing in for the bidirected edge {a, b}.
VertexName latent_name(const VertexName& a, const VertexName& b);

/// Replaces each bidirected edge {A, B} by a latent vertex `U[A,B]` with
/// arrows into A and B. Throws NameCollision if that name is taken.
Admg explicit_confounders(const Admg& g);

// Members of `possible` strictly before v in `order`. Throws UnknownVertex.
VertexSet previous_in_order(const VertexName& v, const VertexSet& possible,
                            std::span<const VertexName> order);

// Graphviz text; bidirected edges dashed with dir=both.
std::string to_dot(const Admg& g);

std::string format_set(const VertexSet& s);

}  // namespace causalid
