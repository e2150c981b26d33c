#include "causalid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "causalid/errors.hpp"
#include "causalid/kernels.hpp"

namespace causalid {

namespace {

constexpr double kRowTolerance = 1e-12;

int bit_width_for(int domain) {
  int bits = 1;
  while ((1 << bits) < domain) ++bits;
  return bits;
}

std::size_t product_of(const std::vector<int>& sizes) {
  std::size_t n = 1;
  for (int d : sizes) n *= static_cast<std::size_t>(d);
  return n;
}

void check_distribution(const std::vector<double>& row, const std::string& what) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) throw ModelError(what + " has a negative or NaN entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kRowTolerance) {
    throw ModelError(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace

// ---- DiscreteScm ----

int DiscreteScm::domain_of(const VertexName& v) const {
  for (const auto& o : observed) {
    if (o.name == v) return o.domain;
  }
  for (const auto& l : latents) {
    if (l.name == v) return l.domain;
  }
  throw UnknownVertex("unknown model variable '" + v + "'");
}

std::string DiscreteScm::label(const VertexName& v, int value) const {
  for (const auto& o : observed) {
    if (o.name == v && !o.labels.empty()) return o.labels.at(static_cast<std::size_t>(value));
  }
  return std::to_string(value);
}

int DiscreteScm::value_of(const VertexName& v, const std::string& text) const {
  for (const auto& o : observed) {
    if (o.name != v) continue;
    if (o.labels.empty()) {
      for (int i = 0; i < o.domain; ++i) {
        if (std::to_string(i) == text) return i;
      }
    } else {
      auto it = std::find(o.labels.begin(), o.labels.end(), text);
      if (it != o.labels.end()) return static_cast<int>(it - o.labels.begin());
    }
    throw ModelError("'" + text + "' is not a value of " + v);
  }
  throw UnknownVertex("unknown model variable '" + v + "'");
}

void validate(const DiscreteScm& m) {
  if (m.observed.empty()) throw ModelError("model has no observed variables");
  VertexSet names;
  VertexSet observed_names;
  for (const auto& o : m.observed) {
    if (!is_valid_vertex_name(o.name)) throw ModelError("invalid variable name '" + o.name + "'");
    if (!names.insert(o.name).second) throw ModelError("duplicate variable '" + o.name + "'");
    if (o.domain < 2) throw ModelError("domain of " + o.name + " has fewer than two values");
    if (!o.labels.empty() && static_cast<int>(o.labels.size()) != o.domain) {
      throw ModelError("label count of " + o.name + " does not match its domain");
    }
    observed_names.insert(o.name);
  }
  for (const auto& l : m.latents) {
    if (!names.insert(l.name).second) throw ModelError("duplicate variable '" + l.name + "'");
    if (l.domain < 2) throw ModelError("domain of latent " + l.name + " has fewer than two values");
    if (static_cast<int>(l.marginal.size()) != l.domain) {
      throw ModelError("marginal of latent " + l.name + " does not match its domain");
    }
    check_distribution(l.marginal, "marginal of latent " + l.name);
    if (auto it = m.parents.find(l.name); it != m.parents.end() && !it->second.empty()) {
      throw ModelError("latent " + l.name + " has parents");
    }
    int children = 0;
    for (const auto& [child, ps] : m.parents) {
      if (std::count(ps.begin(), ps.end(), l.name)) ++children;
    }
    if (children != 2) {
      throw ModelError("latent " + l.name + " must have exactly two observed children");
    }
  }
  std::set<DirectedEdge> edges;
  for (const auto& [child, ps] : m.parents) {
    if (!observed_names.count(child)) {
      if (names.count(child) && !ps.empty()) throw ModelError("latent " + child + " has parents");
      if (!names.count(child)) throw ModelError("parents given for unknown variable " + child);
      continue;
    }
    VertexSet seen;
    for (const auto& p : ps) {
      if (!names.count(p)) throw ModelError("unknown parent '" + p + "' of " + child);
      if (!seen.insert(p).second) throw ModelError("repeated parent '" + p + "' of " + child);
      if (p == child) throw ModelError(child + " is its own parent");
      if (observed_names.count(p)) edges.insert({p, child});
    }
  }
  try {
    Admg(observed_names, edges, {});
  } catch (const CyclicGraph&) {
    throw ModelError("parent structure is cyclic");
  }
  for (const auto& o : m.observed) {
    auto it = m.cpts.find(o.name);
    if (it == m.cpts.end()) throw ModelError("missing CPT for " + o.name);
    std::vector<int> parent_domains;
    if (auto p = m.parents.find(o.name); p != m.parents.end()) {
      for (const auto& q : p->second) parent_domains.push_back(m.domain_of(q));
    }
    std::size_t rows = product_of(parent_domains);
    const auto& cpt = it->second;
    if (cpt.size() != rows * static_cast<std::size_t>(o.domain)) {
      throw ModelError("CPT of " + o.name + " has " + std::to_string(cpt.size()) +
                       " entries, expected " + std::to_string(rows * o.domain));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(cpt.begin() + static_cast<std::ptrdiff_t>(r * o.domain),
                              cpt.begin() + static_cast<std::ptrdiff_t>((r + 1) * o.domain));
      check_distribution(row, "CPT row " + std::to_string(r) + " of " + o.name);
    }
  }
  for (const auto& [v, cpt] : m.cpts) {
    if (!observed_names.count(v)) throw ModelError("CPT given for non-observed variable " + v);
  }
}

// ---- JointTable ----

JointTable::JointTable(std::vector<VertexName> variables, std::vector<int> domains)
    : variables_(std::move(variables)), domains_(std::move(domains)) {
  if (variables_.size() != domains_.size()) throw InternalError("variable/domain size mismatch");
  int shift = 0;
  shifts_.resize(domains_.size());
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    shifts_[i] = shift;
    shift += bit_width_for(domains_[i]);
  }
  if (shift > 64) throw ModelError("too many variables for a dense table");
  const std::size_t n = product_of(domains_);
  probs_.assign(n, 0.0);
  keys_.resize(n);
  std::vector<int> values(domains_.size(), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      key |= static_cast<std::uint64_t>(values[i]) << shifts_[i];
    }
    keys_[idx] = key;
    for (std::size_t i = values.size(); i-- > 0;) {
      if (++values[i] < domains_[i]) break;
      values[i] = 0;
    }
  }
}

std::size_t JointTable::position(const VertexName& v) const {
  auto it = std::find(variables_.begin(), variables_.end(), v);
  if (it == variables_.end()) throw UnboundVariable("variable '" + v + "' not in table");
  return static_cast<std::size_t>(it - variables_.begin());
}

int JointTable::domain_of(const VertexName& v) const { return domains_[position(v)]; }

std::map<VertexName, int> JointTable::domain_map() const {
  std::map<VertexName, int> out;
  for (std::size_t i = 0; i < variables_.size(); ++i) out[variables_[i]] = domains_[i];
  return out;
}

std::size_t JointTable::index_of(const Binding& full) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    auto it = full.find(variables_[i]);
    if (it == full.end()) throw UnboundVariable("variable '" + variables_[i] + "' unbound");
    if (it->second < 0 || it->second >= domains_[i]) {
      throw ModelError("value out of range for " + variables_[i]);
    }
    idx = idx * static_cast<std::size_t>(domains_[i]) + static_cast<std::size_t>(it->second);
  }
  return idx;
}

Binding JointTable::assignment(std::size_t index) const {
  Binding out;
  for (std::size_t i = variables_.size(); i-- > 0;) {
    out[variables_[i]] = static_cast<int>(index % static_cast<std::size_t>(domains_[i]));
    index /= static_cast<std::size_t>(domains_[i]);
  }
  return out;
}

double JointTable::marginal(const Binding& partial) const {
  std::uint64_t mask = 0;
  std::uint64_t pattern = 0;
  for (const auto& [v, value] : partial) {
    std::size_t i = position(v);
    if (value < 0 || value >= domains_[i]) throw ModelError("value out of range for " + v);
    std::uint64_t field = (std::uint64_t{1} << bit_width_for(domains_[i])) - 1;
    mask |= field << shifts_[i];
    pattern |= static_cast<std::uint64_t>(value) << shifts_[i];
  }
  if (mask == 0) return total();
  return kernels::masked_sum(probs_, keys_, mask, pattern);
}

double JointTable::total() const { return kernels::sum(probs_); }

// ---- models ----

Admg scm_graph(const DiscreteScm& m) {
  VertexSet observed;
  for (const auto& o : m.observed) observed.insert(o.name);
  std::set<DirectedEdge> directed;
  std::map<VertexName, VertexSet> latent_children;
  for (const auto& [child, ps] : m.parents) {
    if (!observed.count(child)) continue;
    for (const auto& p : ps) {
      if (observed.count(p)) {
        directed.insert({p, child});
      } else {
        latent_children[p].insert(child);
      }
    }
  }
  std::set<BidirectedEdge> bidirected;
  for (const auto& [u, kids] : latent_children) {
    if (kids.size() == 2) bidirected.insert(make_bidirected(*kids.begin(), *kids.rbegin()));
  }
  return Admg(std::move(observed), std::move(directed), std::move(bidirected));
}

JointTable interventional(const DiscreteScm& m, const Binding& x) {
  std::vector<VertexName> names;
  std::vector<int> domains;
  std::map<VertexName, std::size_t> obs_pos;
  for (const auto& o : m.observed) {
    obs_pos[o.name] = names.size();
    names.push_back(o.name);
    domains.push_back(o.domain);
  }
  for (const auto& [v, value] : x) {
    auto it = obs_pos.find(v);
    if (it == obs_pos.end()) throw UnknownVertex("cannot intervene on '" + v + "'");
    if (value < 0 || value >= domains[it->second]) {
      throw ModelError("intervention value out of range for " + v);
    }
  }
  std::map<VertexName, std::size_t> lat_pos;
  std::vector<int> lat_domains;
  for (const auto& l : m.latents) {
    lat_pos[l.name] = lat_domains.size();
    lat_domains.push_back(l.domain);
  }

  JointTable table(names, domains);
  const std::size_t n = table.size();
  std::vector<std::vector<int>> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = table.assignment(i);
    values[i].reserve(names.size());
    for (const auto& v : names) values[i].push_back(a[v]);
  }

  const std::size_t latent_states = product_of(lat_domains);
  std::vector<int> u(lat_domains.size(), 0);
  std::vector<double> acc(n);
  std::vector<double> factor(n);
  auto& probs = table.probabilities();
  for (std::size_t state = 0; state < latent_states; ++state) {
    double weight = 1.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      weight *= m.latents[k].marginal[static_cast<std::size_t>(u[k])];
    }
    std::fill(acc.begin(), acc.end(), 1.0);
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto& v = names[j];
      if (auto forced = x.find(v); forced != x.end()) {
        for (std::size_t i = 0; i < n; ++i) factor[i] = values[i][j] == forced->second ? 1.0 : 0.0;
      } else {
        const auto& cpt = m.cpts.at(v);
        static const std::vector<VertexName> kNoParents;
        auto pit = m.parents.find(v);
        const auto& ps = pit == m.parents.end() ? kNoParents : pit->second;
        for (std::size_t i = 0; i < n; ++i) {
          std::size_t row = 0;
          for (const auto& p : ps) {
            int pv;
            int pd;
            if (auto o = obs_pos.find(p); o != obs_pos.end()) {
              pv = values[i][o->second];
              pd = domains[o->second];
            } else {
              std::size_t k = lat_pos.at(p);
              pv = u[k];
              pd = lat_domains[k];
            }
            row = row * static_cast<std::size_t>(pd) + static_cast<std::size_t>(pv);
          }
          factor[i] = cpt[row * static_cast<std::size_t>(domains[j]) +
                          static_cast<std::size_t>(values[i][j])];
        }
      }
      kernels::multiply(acc, factor);
    }
    kernels::axpy(weight, acc, probs);
    for (std::size_t k = u.size(); k-- > 0;) {
      if (++u[k] < lat_domains[k]) break;
      u[k] = 0;
    }
  }
  return table;
}

JointTable joint(const DiscreteScm& m) { return interventional(m, {}); }

double conditional_from_table(const JointTable& t, const Binding& var, const Binding& cond) {
  Binding both = cond;
  for (const auto& [v, value] : var) {
    if (!both.emplace(v, value).second) {
      throw OverlappingSets("variable '" + v + "' is both conditioned and queried");
    }
  }
  const double den = t.marginal(cond);
  if (den == 0.0) throw ZeroDenominator("conditioning event has probability zero");
  return t.marginal(both) / den;
}

namespace {

Binding restrict_to(const Binding& b, const VertexSet& vs) {
  Binding out;
  for (const auto& v : vs) {
    auto it = b.find(v);
    if (it == b.end()) throw UnboundVariable("variable '" + v + "' is unbound");
    out[v] = it->second;
  }
  return out;
}

}  // namespace

double evaluate(const Expression& e, const JointTable& t, const Binding& b) {
  if (const auto* a = as_atom(e)) {
    return conditional_from_table(t, restrict_to(b, a->var), restrict_to(b, a->cond));
  }
  if (const auto* p = as_product(e)) {
    double value = 1.0;
    for (const auto& c : p->children) value *= evaluate(c, t, b);
    return value;
  }
  if (const auto* m = as_marginal(e)) {
    double value = 0.0;
    for (const auto& extra : all_assignments(m->sumset, t.domain_map())) {
      Binding inner = b;
      for (const auto& [v, x] : extra) inner[v] = x;
      value += evaluate(m->body, t, inner);
    }
    return value;
  }
  const auto* q = as_quotient(e);
  const double den = evaluate(q->den, t, b);
  if (den == 0.0) throw ZeroDenominator("denominator evaluates to zero");
  return evaluate(q->num, t, b) / den;
}

DiscreteScm random_scm(const Admg& g, std::uint64_t seed,
                       const std::map<VertexName, int>& domain_sizes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_row = [&](int size) {
    std::vector<double> row(static_cast<std::size_t>(size));
    double total = 0.0;
    for (auto& p : row) {
      p = 0.05 + unit(rng);
      total += p;
    }
    for (auto& p : row) p /= total;
    return row;
  };

  DiscreteScm m;
  for (const auto& v : g.topological_order()) {
    auto it = domain_sizes.find(v);
    m.observed.push_back({v, it == domain_sizes.end() ? 2 : it->second, {}});
    m.parents[v];
  }
  for (const auto& [a, b] : g.bidirected()) {
    m.latents.push_back({latent_name(a, b), 2, draw_row(2)});
  }
  for (const auto& [tail, head] : g.directed()) m.parents[head].push_back(tail);
  for (const auto& [a, b] : g.bidirected()) {
    m.parents[a].push_back(latent_name(a, b));
    m.parents[b].push_back(latent_name(a, b));
  }
  for (const auto& o : m.observed) {
    std::size_t rows = 1;
    for (const auto& p : m.parents[o.name]) rows *= static_cast<std::size_t>(m.domain_of(p));
    std::vector<double> cpt;
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = draw_row(o.domain);
      cpt.insert(cpt.end(), row.begin(), row.end());
    }
    m.cpts[o.name] = std::move(cpt);
  }
  return m;
}

double conditional_mutual_information(const JointTable& t, const VertexSet& xs,
                                      const VertexSet& ys, const VertexSet& zs) {
  const auto domains = t.domain_map();
  double info = 0.0;
  for (const auto& z : all_assignments(zs, domains)) {
    const double pz = t.marginal(z);
    if (pz == 0.0) continue;
    for (const auto& x : all_assignments(xs, domains)) {
      Binding xz = z;
      xz.insert(x.begin(), x.end());
      const double pxz = t.marginal(xz);
      if (pxz == 0.0) continue;
      for (const auto& y : all_assignments(ys, domains)) {
        Binding yz = z;
        yz.insert(y.begin(), y.end());
        Binding xyz = xz;
        xyz.insert(y.begin(), y.end());
        const double pxyz = t.marginal(xyz);
        if (pxyz == 0.0) continue;
        info += pxyz * std::log(pxyz * pz / (pxz * t.marginal(yz)));
      }
    }
  }
  return info;
}

std::vector<Binding> all_assignments(const VertexSet& vs,
                                     const std::map<VertexName, int>& domains) {
  std::vector<VertexName> names(vs.begin(), vs.end());
  std::vector<int> sizes;
  for (const auto& v : names) {
    auto it = domains.find(v);
    if (it == domains.end()) throw UnboundVariable("no domain known for '" + v + "'");
    sizes.push_back(it->second);
  }
  std::vector<Binding> out;
  std::vector<int> values(names.size(), 0);
  const std::size_t n = product_of(sizes);
  out.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    Binding b;
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = values[i];
    out.push_back(std::move(b));
    for (std::size_t i = names.size(); i-- > 0;) {
      if (++values[i] < sizes[i]) break;
      values[i] = 0;
    }
  }
  return out;
}

}  // namespace causalid
