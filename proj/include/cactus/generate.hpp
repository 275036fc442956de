#pragma once

#include "cactus/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cactus {

/// Shapes: chain, star, caterpillar, uniform, balanced. Shapes that cannot hit
/// n exactly are padded with 2-cycles or triangles.
Graph gen_cactus(int n, const std::string& shape, std::uint64_t seed);

const std::vector<std::string>& cactus_shapes();

/// One representative per isomorphism class of Christmas cacti on exactly n
/// vertices (n <= 10 is practical).
std::vector<Graph> enumerate_cacti(int n);

/// Relabel-invariant key; equal keys iff isomorphic.
std::string canonical_form(const Graph& g);

}  // namespace cactus
