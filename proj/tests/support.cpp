#include "support.hpp"

#include <algorithm>
#include <stdexcept>

namespace causalid::testing {

Admg graph(std::initializer_list<const char*> edges) {
  std::vector<std::string> specs(edges.begin(), edges.end());
  return parse_graph(specs);
}

Admg random_admg(std::mt19937_64& rng, int vertices, double p_directed, int max_bidirected) {
  std::vector<VertexName> names;
  for (int i = 0; i < vertices; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  std::vector<VertexName> order = names;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(p_directed);
  std::set<DirectedEdge> directed;
  for (int i = 0; i < vertices; ++i) {
    for (int j = i + 1; j < vertices; ++j) {
      if (coin(rng)) directed.insert({order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]});
    }
  }
  std::set<BidirectedEdge> bidirected;
  if (vertices >= 2 && max_bidirected > 0) {
    std::uniform_int_distribution<int> count(0, max_bidirected);
    std::uniform_int_distribution<int> pick(0, vertices - 1);
    int target = count(rng);
    for (int attempt = 0; attempt < 50 && static_cast<int>(bidirected.size()) < target; ++attempt) {
      int a = pick(rng);
      int b = pick(rng);
      if (a != b) {
        bidirected.insert(make_bidirected(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)]));
      }
    }
  }
  return Admg(VertexSet(names.begin(), names.end()), directed, bidirected);
}

VertexSet random_subset(std::mt19937_64& rng, const VertexSet& from, std::size_t max_size) {
  if (from.empty()) throw std::invalid_argument("random_subset of an empty set");
  std::vector<VertexName> pool(from.begin(), from.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  std::uniform_int_distribution<std::size_t> size(1, std::min(max_size, pool.size()));
  std::size_t n = size(rng);
  return VertexSet(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
}

std::map<VertexName, int> observed_domains(const DiscreteScm& m) {
  std::map<VertexName, int> out;
  for (const auto& o : m.observed) out[o.name] = o.domain;
  return out;
}

JointTable brute_interventional(const DiscreteScm& m, const Binding& x) {
  std::vector<VertexName> names;
  std::vector<int> domains;
  for (const auto& o : m.observed) {
    names.push_back(o.name);
    domains.push_back(o.domain);
  }
  JointTable table(names, domains);

  std::vector<VertexName> all = names;
  std::vector<int> sizes = domains;
  for (const auto& l : m.latents) {
    all.push_back(l.name);
    sizes.push_back(l.domain);
  }
  std::vector<int> value(all.size(), 0);
  while (true) {
    std::map<VertexName, int> a;
    for (std::size_t i = 0; i < all.size(); ++i) a[all[i]] = value[i];
    double p = 1.0;
    for (const auto& l : m.latents) p *= l.marginal[static_cast<std::size_t>(a[l.name])];
    for (const auto& o : m.observed) {
      if (auto it = x.find(o.name); it != x.end()) {
        if (a[o.name] != it->second) p = 0.0;
        continue;
      }
      std::size_t row = 0;
      auto pit = m.parents.find(o.name);
      if (pit != m.parents.end()) {
        for (const auto& par : pit->second) {
          row = row * static_cast<std::size_t>(m.domain_of(par)) + static_cast<std::size_t>(a[par]);
        }
      }
      p *= m.cpts.at(o.name)[row * static_cast<std::size_t>(o.domain) + static_cast<std::size_t>(a[o.name])];
    }
    Binding observed;
    for (const auto& n : names) observed[n] = a[n];
    table.probabilities()[table.index_of(observed)] += p;

    std::size_t k = all.size();
    while (k > 0) {
      --k;
      if (++value[k] < sizes[k]) break;
      value[k] = 0;
      if (k == 0) return table;
    }
    if (all.empty()) return table;
  }
}

}  // namespace causalid::testing
