#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "causalid/admg.hpp"

namespace causalid {

struct Node;

/// Immutable symbolic probability expression. Nodes are shared freely
/// between trees; nothing mutates them after construction.
using Expression = std::shared_ptr<const Node>;

// P(var | cond)
struct Atom {
  VertexSet var;
  VertexSet cond;
};

struct Product {
  std::vector<Expression> children;
};

struct Marginal {
  VertexSet sumset;
  Expression body;
};

struct Quotient {
  Expression num;
  Expression den;
};

struct Node {
  std::variant<Atom, Product, Marginal, Quotient> value;
};

// Throws EmptyVar if var is empty, OverlappingSets if var meets cond.
Expression make_atom(VertexSet var, VertexSet cond = {});
// A single child is returned as is. Throws InternalError on no children.
Expression make_product(std::vector<Expression> children);
// An empty sumset returns body unchanged.
Expression make_marginal(VertexSet sumset, Expression body);
Expression make_quotient(Expression num, Expression den);

const Atom* as_atom(const Expression& e);
const Product* as_product(const Expression& e);
const Marginal* as_marginal(const Expression& e);
const Quotient* as_quotient(const Expression& e);

VertexSet free_variables(const Expression& e);

// Nodes in the tree plus every variable occurrence.
std::size_t expression_size(const Expression& e);

/// Sums vs out of e. An unconditioned atom just loses those variables
/// unless none would remain; anything else is wrapped in a Marginal over the variables of vs that are
/// free in e.
Expression marginalize(const Expression& e, const VertexSet& vs);

enum class SimplifyLevel {
  none,
  // Every rewrite except merging chained conditionals.
  basic,
  full,
};

Expression simplify(const Expression& e, SimplifyLevel level = SimplifyLevel::full);

/// P(var | cond) computed from the distribution p over `scope`.
/// Throws EmptyVar if var is empty, OverlappingSets if var meets cond.
Expression conditional(const Expression& p, const VertexSet& var, const VertexSet& cond,
                       const VertexSet& scope,
                       SimplifyLevel level = SimplifyLevel::full);
// Scope defaults to the free variables of p.
Expression conditional(const Expression& p, const VertexSet& var, const VertexSet& cond);

// Variables lowercased and sorted, e.g. `\sum_{z}P(y|x, z)P(z)`.
std::string to_latex(const Expression& e);
// Plain text with original names, e.g. `sum_{Z}[P(Y|X,Z) * P(Z)]`.
std::string to_text(const Expression& e);
// Fully bracketed structural encoding; equal keys mean equal trees.
std::string structural_key(const Expression& e);

bool expressions_equal(const Expression& a, const Expression& b);

}  // namespace causalid
