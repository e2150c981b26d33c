#include "causalid/identify.hpp"

#include <algorithm>
#include <optional>

#include "causalid/separation.hpp"

namespace causalid {

NotIdentifiable::NotIdentifiable(HedgeWitness witness)
    : Error("effect of " + format_set(witness.sub_x) + " on " + format_set(witness.sub_y) +
            " blocked by a hedge over " + format_set(witness.forest_f.vertices())),
      witness_(std::move(witness)) {}

namespace {

class Identifier {
 public:
  explicit Identifier(const IdentifyOptions& options) : options_(options) {}

  Expression id(const VertexSet& y, const VertexSet& x, const Expression& p, const Admg& g,
                int depth) const {
    const VertexSet& v = g.vertices();

    if (x.empty()) {
      record(depth, Algorithm::id, 1, y, x, {});
      return marginalize(p, set_difference(v, y));
    }

    const VertexSet an = ancestors(g, y);
    if (an != v) {
      record(depth, Algorithm::id, 2, y, x, {});
      return id(y, set_intersection(x, an), marginalize(p, set_difference(v, an)),
                induced_subgraph(g, an), depth + 1);
    }

    const VertexSet w =
        set_difference(set_difference(v, x), ancestors(cut_incoming(g, x), y));
    if (!w.empty()) {
      record(depth, Algorithm::id, 3, y, x, {});
      return id(y, set_union(x, w), p, g, depth + 1);
    }

    const auto parts = c_components(induced_subgraph(g, set_difference(v, x)));
    if (parts.size() > 1) {
      record(depth, Algorithm::id, 4, y, x, {});
      // Identified last to first; a hedge is reported for the latest
      // failing component.
      std::vector<Expression> terms(parts.size());
      for (std::size_t i = parts.size(); i-- > 0;) {
        terms[i] = id(parts[i], set_difference(v, parts[i]), p, g, depth + 1);
      }
      return marginalize(make_product(std::move(terms)),
                         set_difference(v, set_union(y, x)));
    }

    const VertexSet& s = parts.front();
    const auto components = c_components(g);
    if (components.size() == 1) {
      record(depth, Algorithm::id, 5, y, x, {});
      throw NotIdentifiable(hedge_search_witness(g, s, x, y));
    }

    if (std::find(components.begin(), components.end(), s) != components.end()) {
      record(depth, Algorithm::id, 6, y, x, {});
      return marginalize(chain_factors(p, s, g), set_difference(s, y));
    }

    auto it = std::find_if(components.begin(), components.end(),
                           [&](const VertexSet& c) { return is_subset(s, c); });
    if (it == components.end()) {
      throw InternalError("no line of the identification algorithm applies to " +
                          format_set(y) + " under do" + format_set(x));
    }
    record(depth, Algorithm::id, 7, y, x, {});
    const VertexSet& s_prime = *it;
    return id(y, set_intersection(x, s_prime), chain_factors(p, s_prime, g),
              induced_subgraph(g, s_prime), depth + 1);
  }

  Expression idc(const VertexSet& y, const VertexSet& x, const VertexSet& z,
                 const Expression& p, const Admg& g, int depth) const {
    const Admg without_x = cut_incoming(g, x);
    for (const auto& candidate : g.topological_order()) {
      if (!z.count(candidate)) continue;
      VertexSet rest = z;
      rest.erase(candidate);
      const Admg surgered = cut_outgoing(without_x, {candidate});
      if (d_separated(surgered, y, {candidate}, set_union(x, rest))) {
        record(depth, Algorithm::idc, 1, y, x, z);
        return idc(y, set_union(x, {candidate}), rest, p, g, depth + 1);
      }
    }
    record(depth, Algorithm::idc, 2, y, x, z);
    Expression joint = id(set_union(y, z), x, p, g, depth + 1);
    return simplify(make_quotient(joint, marginalize(joint, y)), options_.simplify);
  }

 private:
  // Product over s, in topological order, of P(v_i | v_1, ..., v_{i-1}).
  Expression chain_factors(const Expression& p, const VertexSet& s, const Admg& g) const {
    const auto& order = g.topological_order();
    std::vector<Expression> out;
    for (const auto& vi : order) {
      if (!s.count(vi)) continue;
      out.push_back(conditional(p, {vi}, previous_in_order(vi, g.vertices(), order),
                                g.vertices(), options_.simplify));
    }
    return make_product(std::move(out));
  }

  void record(int depth, Algorithm algorithm, int line, const VertexSet& y, const VertexSet& x,
              const VertexSet& z) const {
    if (options_.trace) options_.trace->push_back({depth, algorithm, line, y, x, z});
  }

  const IdentifyOptions& options_;
};

void validate(const Query& q, const Admg& g) {
  if (q.y.empty()) throw InvalidQuery("effect set is empty");
  for (const auto* s : {&q.y, &q.x, &q.z}) {
    for (const auto& v : *s) {
      if (!g.contains(v)) throw InvalidQuery("unknown vertex '" + v + "'");
    }
  }
  if (!disjoint(q.y, q.x)) throw InvalidQuery("effect and intervention sets overlap");
  if (!disjoint(q.y, q.z)) throw InvalidQuery("effect and conditioning sets overlap");
  if (!disjoint(q.x, q.z)) throw InvalidQuery("intervention and conditioning sets overlap");
}

// Keeps the first child, in topological order, among `allowed`.
std::optional<VertexName> first_child(const Admg& g, const VertexName& v,
                                      const VertexSet& allowed) {
  const VertexSet kids = g.children(v);
  for (const auto& u : g.topological_order()) {
    if (kids.count(u) && allowed.count(u)) return u;
  }
  return std::nullopt;
}

}  // namespace

Expression id_uncond(const VertexSet& y, const VertexSet& x, const Expression& p,
                     const Admg& g, const IdentifyOptions& options) {
  return Identifier(options).id(y, x, p, g, 0);
}

Expression idc(const VertexSet& y, const VertexSet& x, const VertexSet& z, const Expression& p,
               const Admg& g, const IdentifyOptions& options) {
  return Identifier(options).idc(y, x, z, p, g, 0);
}

HedgeWitness hedge_search_witness(const Admg& g, const VertexSet& s, const VertexSet& x,
                                  const VertexSet& y) {
  return HedgeWitness{g, induced_subgraph(g, s), x, y};
}

HedgeWitness thin_hedge(const HedgeWitness& w) {
  const Admg& f = w.forest_f;
  const VertexSet& s = w.forest_f_sub.vertices();
  std::set<DirectedEdge> keep;
  for (const auto& v : f.vertices()) {
    std::optional<VertexName> child;
    if (s.count(v)) child = first_child(f, v, s);
    if (!child) child = first_child(f, v, f.vertices());
    if (child) keep.insert({v, *child});
  }
  Admg thin_f(f.vertices(), keep, f.bidirected());
  return HedgeWitness{thin_f, induced_subgraph(thin_f, s), w.sub_x, w.sub_y};
}

bool is_c_forest(const Admg& g) {
  if (g.empty() || c_components(g).size() != 1) return false;
  return std::all_of(g.vertices().begin(), g.vertices().end(),
                     [&](const VertexName& v) { return g.children(v).size() <= 1; });
}

Identification identify(const Query& q, const Admg& g, const IdentifyOptions& options) {
  validate(q, g);
  Expression p = make_atom(g.vertices());
  try {
    Expression e = q.z.empty() ? id_uncond(q.y, q.x, p, g, options)
                               : idc(q.y, q.x, q.z, p, g, options);
    return simplify(e, options.simplify);
  } catch (const NotIdentifiable& failure) {
    return options.thin_hedge ? thin_hedge(failure.witness()) : failure.witness();
  }
}

std::string format_trace_entry(const TraceEntry& e) {
  std::string out(static_cast<std::size_t>(e.depth) * 2, ' ');
  out += e.algorithm == Algorithm::id ? "ID" : "IDC";
  out += " line " + std::to_string(e.line) + ": y=" + format_set(e.y) + " x=" + format_set(e.x);
  if (e.algorithm == Algorithm::idc) out += " z=" + format_set(e.z);
  return out;
}

}  // namespace causalid
