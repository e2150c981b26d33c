#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalid/admg.hpp"
#include "causalid/expr.hpp"

namespace causalid {

// Variable -> value index within its domain.
using Binding = std::map<VertexName, int>;

struct ObservedVar {
  VertexName name;
  int domain = 2;
  // Optional value names; empty means "0", "1", ...
  std::vector<std::string> labels;
};

struct LatentVar {
  VertexName name;
  int domain = 2;
  std::vector<double> marginal;
};

/// A fully specified discrete structural causal model.
///
/// cpts[v] is a flat table of P(v | parents[v]): one row per parent
/// assignment (mixed radix over parents[v], last parent fastest), each row
/// holding the domain of v. Only observed variables have CPTs.
struct DiscreteScm {
  std::vector<ObservedVar> observed;
  std::vector<LatentVar> latents;
  std::map<VertexName, std::vector<VertexName>> parents;
  std::map<VertexName, std::vector<double>> cpts;

  int domain_of(const VertexName& v) const;
  std::string label(const VertexName& v, int value) const;
  // Throws ModelError for an unknown label.
  int value_of(const VertexName& v, const std::string& label) const;
};

// Throws ModelError describing the first violated invariant.
void validate(const DiscreteScm& m);

/// Dense distribution over every assignment of `variables`. Entries are laid
/// out in mixed radix with the last variable fastest; keys[i] packs the same
/// assignment into bit fields for masked reductions.
class JointTable {
 public:
  JointTable(std::vector<VertexName> variables, std::vector<int> domains);

  const std::vector<VertexName>& variables() const { return variables_; }
  const std::vector<int>& domains() const { return domains_; }
  std::vector<double>& probabilities() { return probs_; }
  const std::vector<double>& probabilities() const { return probs_; }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::size_t size() const { return probs_.size(); }

  int domain_of(const VertexName& v) const;
  std::map<VertexName, int> domain_map() const;
  std::size_t index_of(const Binding& full) const;
  Binding assignment(std::size_t index) const;

  // Sum of entries consistent with a partial assignment.
  double marginal(const Binding& partial) const;
  double total() const;

 private:
  std::size_t position(const VertexName& v) const;

  std::vector<VertexName> variables_;
  std::vector<int> domains_;
  std::vector<int> shifts_;
  std::vector<double> probs_;
  std::vector<std::uint64_t> keys_;
};

Admg scm_graph(const DiscreteScm& m);

JointTable joint(const DiscreteScm& m);
// Distribution of the observed variables in the model where each variable
// in x is forced to its bound value.
JointTable interventional(const DiscreteScm& m, const Binding& x);

/// P(var | cond) from t. Throws ZeroDenominator when P(cond) = 0 and
/// OverlappingSets when var and cond share a variable.
double conditional_from_table(const JointTable& t, const Binding& var, const Binding& cond);

/// Numeric value of e on t. b must bind every free variable of e;
/// UnboundVariable otherwise.
double evaluate(const Expression& e, const JointTable& t, const Binding& b);

/// Random model with graph g: each CPT row and latent marginal has entries
/// 0.05 + U(0, 1) normalized; one binary latent `U[A,B]` per bidirected
/// edge. Domain sizes default to 2.
DiscreteScm random_scm(const Admg& g, std::uint64_t seed,
                       const std::map<VertexName, int>& domain_sizes = {});

// I(X; Y | Z) in nats from the exact table.
double conditional_mutual_information(const JointTable& t, const VertexSet& xs,
                                      const VertexSet& ys, const VertexSet& zs);

// Every assignment of vs, in lexicographic order of (sorted) variables.
std::vector<Binding> all_assignments(const VertexSet& vs, const std::map<VertexName, int>& domains);

}  // namespace causalid
