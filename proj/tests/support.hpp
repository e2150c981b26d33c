#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causalid/admg.hpp"
#include "causalid/oracle.hpp"

namespace causalid::testing {

Admg graph(std::initializer_list<const char*> edges);

// Vertices named A, B, C, ...; directed edges follow a random order so the
// result is acyclic; up to max_bidirected distinct bidirected edges.
Admg random_admg(std::mt19937_64& rng, int vertices, double p_directed, int max_bidirected);

// Nonempty random subset of `from`, at most max_size members.
VertexSet random_subset(std::mt19937_64& rng, const VertexSet& from, std::size_t max_size);

/// Interventional distribution computed straight from the definition: loop
/// over every observed and latent assignment, multiply the CPT entries of
/// the non-intervened variables and the indicator of the forced ones. No
/// shared code with the production enumerator beyond the table container.
JointTable brute_interventional(const DiscreteScm& m, const Binding& x);

// Domain map of the observed variables of m.
std::map<VertexName, int> observed_domains(const DiscreteScm& m);

}  // namespace causalid::testing
