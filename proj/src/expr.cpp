#include "causalid/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "causalid/errors.hpp"

namespace causalid {

Expression make_atom(VertexSet var, VertexSet cond) {
  if (var.empty()) throw EmptyVar("probability atom needs at least one variable");
  if (!disjoint(var, cond)) {
    throw OverlappingSets("atom variables " + format_set(var) + " meet conditioning set " +
                          format_set(cond));
  }
  return std::make_shared<const Node>(Node{Atom{std::move(var), std::move(cond)}});
}

Expression make_product(std::vector<Expression> children) {
  if (children.empty()) throw InternalError("product without factors");
  if (children.size() == 1) return children.front();
  return std::make_shared<const Node>(Node{Product{std::move(children)}});
}

Expression make_marginal(VertexSet sumset, Expression body) {
  if (sumset.empty()) return body;
  return std::make_shared<const Node>(Node{Marginal{std::move(sumset), std::move(body)}});
}

Expression make_quotient(Expression num, Expression den) {
  return std::make_shared<const Node>(Node{Quotient{std::move(num), std::move(den)}});
}

const Atom* as_atom(const Expression& e) { return std::get_if<Atom>(&e->value); }
const Product* as_product(const Expression& e) { return std::get_if<Product>(&e->value); }
const Marginal* as_marginal(const Expression& e) { return std::get_if<Marginal>(&e->value); }
const Quotient* as_quotient(const Expression& e) { return std::get_if<Quotient>(&e->value); }

namespace {

void collect_free(const Expression& e, VertexSet& out) {
  if (const auto* a = as_atom(e)) {
    out.insert(a->var.begin(), a->var.end());
    out.insert(a->cond.begin(), a->cond.end());
  } else if (const auto* p = as_product(e)) {
    for (const auto& c : p->children) collect_free(c, out);
  } else if (const auto* m = as_marginal(e)) {
    VertexSet inner;
    collect_free(m->body, inner);
    for (const auto& v : inner) {
      if (!m->sumset.count(v)) out.insert(v);
    }
  } else if (const auto* q = as_quotient(e)) {
    collect_free(q->num, out);
    collect_free(q->den, out);
  }
}

}  // namespace

VertexSet free_variables(const Expression& e) {
  VertexSet out;
  collect_free(e, out);
  return out;
}

std::size_t expression_size(const Expression& e) {
  if (const auto* a = as_atom(e)) return 1 + a->var.size() + a->cond.size();
  if (const auto* p = as_product(e)) {
    std::size_t n = 1;
    for (const auto& c : p->children) n += expression_size(c);
    return n;
  }
  if (const auto* m = as_marginal(e)) return 1 + m->sumset.size() + expression_size(m->body);
  const auto* q = as_quotient(e);
  return 1 + expression_size(q->num) + expression_size(q->den);
}

Expression marginalize(const Expression& e, const VertexSet& vs) {
  if (vs.empty()) return e;
  if (const auto* a = as_atom(e); a && a->cond.empty()) {
    VertexSet kept = set_difference(a->var, vs);
    if (!kept.empty()) return make_atom(std::move(kept));
  }
  return make_marginal(set_intersection(vs, free_variables(e)), e);
}

// ---- rendering ----

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string latex_list(const VertexSet& s) {
  std::vector<std::pair<std::string, std::string>> names;
  for (const auto& v : s) names.emplace_back(lower(v), v);
  std::sort(names.begin(), names.end());
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i].first;
  }
  return out;
}

std::string text_list(const VertexSet& s) {
  std::string out;
  for (const auto& v : s) {
    if (!out.empty()) out += ',';
    out += v;
  }
  return out;
}

}  // namespace

std::string to_latex(const Expression& e) {
  if (const auto* a = as_atom(e)) {
    std::string out = "P(" + latex_list(a->var);
    if (!a->cond.empty()) out += "|" + latex_list(a->cond);
    return out + ")";
  }
  if (const auto* p = as_product(e)) {
    std::string out;
    for (std::size_t i = 0; i < p->children.size(); ++i) {
      const auto& c = p->children[i];
      bool wrap = as_marginal(c) != nullptr && i + 1 < p->children.size();
      out += wrap ? "\\left(" + to_latex(c) + "\\right)" : to_latex(c);
    }
    return out;
  }
  if (const auto* m = as_marginal(e)) {
    return "\\sum_{" + latex_list(m->sumset) + "}" + to_latex(m->body);
  }
  const auto* q = as_quotient(e);
  return "\\frac{" + to_latex(q->num) + "}{" + to_latex(q->den) + "}";
}

std::string to_text(const Expression& e) {
  if (const auto* a = as_atom(e)) {
    std::string out = "P(" + text_list(a->var);
    if (!a->cond.empty()) out += "|" + text_list(a->cond);
    return out + ")";
  }
  if (const auto* p = as_product(e)) {
    std::string out;
    for (std::size_t i = 0; i < p->children.size(); ++i) {
      if (i) out += " * ";
      const auto& c = p->children[i];
      out += as_quotient(c) ? "(" + to_text(c) + ")" : to_text(c);
    }
    return out;
  }
  if (const auto* m = as_marginal(e)) {
    return "sum_{" + text_list(m->sumset) + "}[" + to_text(m->body) + "]";
  }
  const auto* q = as_quotient(e);
  return "[" + to_text(q->num) + "] / [" + to_text(q->den) + "]";
}

std::string structural_key(const Expression& e) {
  if (const auto* a = as_atom(e)) return "A(" + text_list(a->var) + "|" + text_list(a->cond) + ")";
  if (const auto* p = as_product(e)) {
    std::string out = "P[";
    for (const auto& c : p->children) out += structural_key(c) + ";";
    return out + "]";
  }
  if (const auto* m = as_marginal(e)) {
    return "M{" + text_list(m->sumset) + "}[" + structural_key(m->body) + "]";
  }
  const auto* q = as_quotient(e);
  return "Q[" + structural_key(q->num) + "//" + structural_key(q->den) + "]";
}

// ---- simplification ----

namespace {

// Sum over A of P(A|C) where the sum leaves C alone: identically one.
bool is_unit(const Expression& e) {
  const auto* m = as_marginal(e);
  if (!m) return false;
  const auto* a = as_atom(m->body);
  return a && is_subset(a->var, m->sumset) && disjoint(a->cond, m->sumset);
}

std::vector<Expression> factors(const Expression& e) {
  if (const auto* p = as_product(e)) return p->children;
  return {e};
}

// A rewrite may drop a variable from a subtree only if no enclosing sum binds
// it; otherwise the sum would silently change its range.
bool safe_to_drop(const VertexSet& before, const VertexSet& after, const VertexSet& bound) {
  return disjoint(set_difference(before, after), bound);
}

VertexSet free_of_all(const std::vector<Expression>& es) {
  VertexSet out;
  for (const auto& e : es) collect_free(e, out);
  return out;
}

void sort_canonical(std::vector<Expression>& children) {
  std::vector<std::pair<std::pair<std::string, std::string>, Expression>> keyed;
  keyed.reserve(children.size());
  for (auto& c : children) keyed.push_back({{to_latex(c), structural_key(c)}, c});
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < children.size(); ++i) children[i] = keyed[i].second;
}

// P(A|B,C) P(B|C) = P(A,B|C)
bool merge_chain(std::vector<Expression>& children) {
  for (std::size_t i = 0; i < children.size(); ++i) {
    const auto* p1 = as_atom(children[i]);
    if (!p1) continue;
    for (std::size_t j = 0; j < children.size(); ++j) {
      if (i == j) continue;
      const auto* p2 = as_atom(children[j]);
      if (!p2 || p1->cond != set_union(p2->var, p2->cond)) continue;
      Expression merged =
          make_atom(set_union(p1->var, p2->var), set_difference(p1->cond, p2->var));
      std::vector<Expression> next;
      for (std::size_t k = 0; k < children.size(); ++k) {
        if (k == i) {
          next.push_back(merged);
        } else if (k != j) {
          next.push_back(children[k]);
        }
      }
      children = std::move(next);
      return true;
    }
  }
  return false;
}

class Simplifier {
 public:
  explicit Simplifier(SimplifyLevel level) : level_(level) {}

  Expression step(const Expression& e, const VertexSet& bound) const {
    if (as_atom(e)) return e;
    if (const auto* p = as_product(e)) return product(*p, bound);
    if (const auto* m = as_marginal(e)) return marginal(*m, bound);
    return quotient(*as_quotient(e), bound);
  }

 private:
  Expression product(const Product& p, const VertexSet& bound) const {
    std::vector<Expression> children;
    for (const auto& c : p.children) {
      auto s = step(c, bound);
      auto fs = factors(s);
      children.insert(children.end(), fs.begin(), fs.end());
    }
    if (level_ == SimplifyLevel::full) {
      sort_canonical(children);
      while (merge_chain(children)) sort_canonical(children);
    }
    for (std::size_t i = 0; i < children.size() && children.size() > 1;) {
      if (!is_unit(children[i])) {
        ++i;
        continue;
      }
      std::vector<Expression> rest = children;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (safe_to_drop(free_variables(children[i]), free_of_all(rest), bound)) {
        children = std::move(rest);
      } else {
        ++i;
      }
    }
    sort_canonical(children);
    return make_product(std::move(children));
  }

  Expression marginal(const Marginal& m, const VertexSet& bound) const {
    Expression body = step(m.body, set_union(bound, m.sumset));
    VertexSet sumset = set_intersection(m.sumset, free_variables(body));
    if (sumset.empty()) return body;

    if (const auto* inner = as_marginal(body)) {
      return make_marginal(set_union(sumset, inner->sumset), inner->body);
    }
    if (const auto* a = as_atom(body)) {
      VertexSet summed = set_intersection(sumset, a->var);
      VertexSet kept = set_difference(a->var, summed);
      if (!summed.empty() && !kept.empty()) {
        return make_marginal(set_difference(sumset, summed), make_atom(kept, a->cond));
      }
      return make_marginal(sumset, body);
    }
    if (const auto* p = as_product(body)) {
      std::vector<VertexSet> frees;
      for (const auto& c : p->children) frees.push_back(free_variables(c));
      std::vector<VertexSet> pushed(p->children.size());
      VertexSet remaining;
      for (const auto& v : sumset) {
        std::size_t count = 0;
        std::size_t owner = 0;
        for (std::size_t i = 0; i < frees.size(); ++i) {
          if (frees[i].count(v)) {
            ++count;
            owner = i;
          }
        }
        if (count == 1) {
          pushed[owner].insert(v);
        } else {
          remaining.insert(v);
        }
      }
      if (remaining != sumset) {
        std::vector<Expression> children;
        for (std::size_t i = 0; i < p->children.size(); ++i) {
          children.push_back(make_marginal(pushed[i], p->children[i]));
        }
        return make_marginal(remaining, make_product(std::move(children)));
      }
    }
    return make_marginal(sumset, body);
  }

  Expression quotient(const Quotient& q, const VertexSet& bound) const {
    Expression num = step(q.num, bound);
    Expression den = step(q.den, bound);
    if (is_unit(den) &&
        safe_to_drop(free_variables(den), free_variables(num), bound)) {
      return num;
    }
    auto nf = factors(num);
    auto df = factors(den);
    const VertexSet before = set_union(free_of_all(nf), free_of_all(df));

    // Cancel identical factors, keeping at least one in the numerator.
    bool changed = false;
    for (std::size_t i = 0; i < df.size() && nf.size() > 1;) {
      auto key = structural_key(df[i]);
      auto it = std::find_if(nf.begin(), nf.end(),
                             [&](const Expression& f) { return structural_key(f) == key; });
      if (it == nf.end()) {
        ++i;
        continue;
      }
      auto nf2 = nf;
      auto df2 = df;
      nf2.erase(nf2.begin() + (it - nf.begin()));
      df2.erase(df2.begin() + static_cast<std::ptrdiff_t>(i));
      if (safe_to_drop(before, set_union(free_of_all(nf2), free_of_all(df2)), bound)) {
        nf = std::move(nf2);
        df = std::move(df2);
        changed = true;
      } else {
        ++i;
      }
    }

    // P(A,B|C) / P(B|C) = P(A|B,C)
    for (std::size_t i = 0; i < df.size();) {
      const auto* d = as_atom(df[i]);
      bool folded = false;
      if (d) {
        for (auto& f : nf) {
          const auto* n = as_atom(f);
          if (n && n->cond == d->cond && is_subset(d->var, n->var) && d->var != n->var) {
            f = make_atom(set_difference(n->var, d->var), set_union(n->cond, d->var));
            folded = true;
            break;
          }
        }
      }
      if (folded) {
        df.erase(df.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }

    if (!changed) return make_quotient(num, den);
    sort_canonical(nf);
    Expression n = make_product(std::move(nf));
    if (df.empty()) return n;
    sort_canonical(df);
    return make_quotient(n, make_product(std::move(df)));
  }

  SimplifyLevel level_;
};

constexpr int kMaxSimplifyPasses = 64;

}  // namespace

Expression simplify(const Expression& e, SimplifyLevel level) {
  if (level == SimplifyLevel::none) return e;
  Simplifier s(level);
  Expression current = e;
  std::string key = structural_key(current);
  for (int pass = 0; pass < kMaxSimplifyPasses; ++pass) {
    Expression next = s.step(current, {});
    std::string next_key = structural_key(next);
    if (next_key == key) return next;
    current = std::move(next);
    key = std::move(next_key);
  }
  throw InternalError("simplification did not reach a fixed point: " + to_text(e));
}

Expression conditional(const Expression& p, const VertexSet& var, const VertexSet& cond,
                       const VertexSet& scope, SimplifyLevel level) {
  if (var.empty()) throw EmptyVar("conditional needs at least one variable");
  if (!disjoint(var, cond)) {
    throw OverlappingSets("variables " + format_set(var) + " meet conditioning set " +
                          format_set(cond));
  }
  if (cond.empty()) return simplify(marginalize(p, set_difference(scope, var)), level);
  Expression num = marginalize(p, set_difference(scope, set_union(var, cond)));
  Expression den = marginalize(p, set_difference(scope, cond));
  return simplify(make_quotient(num, den), level);
}

Expression conditional(const Expression& p, const VertexSet& var, const VertexSet& cond) {
  return conditional(p, var, cond, free_variables(p));
}

bool expressions_equal(const Expression& a, const Expression& b) {
  return structural_key(simplify(a)) == structural_key(simplify(b));
}

}  // namespace causalid
