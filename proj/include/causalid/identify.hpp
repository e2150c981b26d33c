#pragma once

#include <string>
#include <variant>
#include <vector>

#include "causalid/admg.hpp"
#include "causalid/errors.hpp"
#include "causalid/expr.hpp"

namespace causalid {

struct Query {
  VertexSet y;
  VertexSet x;
  VertexSet z;
};

/// Pair of C-forests (F, F') blocking the sub-query P_{sub_x}(sub_y).
struct HedgeWitness {
  Admg forest_f;
  Admg forest_f_sub;
  VertexSet sub_x;
  VertexSet sub_y;
};

class NotIdentifiable : public Error {
 public:
  explicit NotIdentifiable(HedgeWitness witness);
  const HedgeWitness& witness() const { return witness_; }

 private:
  HedgeWitness witness_;
};

enum class Algorithm { id, idc };

// One recursion step: which line fired on which sub-query.
struct TraceEntry {
  int depth = 0;
  Algorithm algorithm = Algorithm::id;
  int line = 0;
  VertexSet y;
  VertexSet x;
  VertexSet z;
};

using Trace = std::vector<TraceEntry>;

struct IdentifyOptions {
  SimplifyLevel simplify = SimplifyLevel::full;
  // Reduce the hedge graphs to literal one-child-per-vertex C-forests.
  bool thin_hedge = false;
  Trace* trace = nullptr;
};

using Identification = std::variant<Expression, HedgeWitness>;

/// Identifies P_x(y | z) in g. Throws InvalidQuery for empty y, unknown
/// vertices or overlapping sets.
Identification identify(const Query& q, const Admg& g, const IdentifyOptions& options = {});

// The recursive algorithms. Both throw NotIdentifiable.
Expression id_uncond(const VertexSet& y, const VertexSet& x, const Expression& p,
                     const Admg& g, const IdentifyOptions& options = {});
Expression idc(const VertexSet& y, const VertexSet& x, const VertexSet& z,
               const Expression& p, const Admg& g, const IdentifyOptions& options = {});

HedgeWitness hedge_search_witness(const Admg& g, const VertexSet& s, const VertexSet& x,
                                  const VertexSet& y);

/// Drops directed edges so that every vertex keeps at most one child while
/// the root sets of both graphs are preserved. The sub-forest keeps the
/// same choice of child as the outer forest.
HedgeWitness thin_hedge(const HedgeWitness& w);

// True when g is a single C-component and each vertex has at most one child.
bool is_c_forest(const Admg& g);

std::string format_trace_entry(const TraceEntry& e);

}  // namespace causalid
