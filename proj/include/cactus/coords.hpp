#pragma once

#include "cactus/embedding.hpp"
#include "cactus/schedule.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace cactus {

using BigCount = boost::multiprecision::cpp_int;

/// Level within the current super level and angular rank within the arc.
struct LevelCyclePair {
  long level = 0;
  long cycle = 0;
  bool operator==(const LevelCyclePair& o) const = default;
};

/// One pair per off-ramp where the root-to-v path changes heavy paths, then
/// v's own pair. pairs.size() - 1 is v's super level.
struct Coordinate {
  std::vector<LevelCyclePair> pairs;
  VariantParams params;

  int superlevel() const { return static_cast<int>(pairs.size()) - 1; }
  bool operator==(const Coordinate& o) const { return pairs == o.pairs && params == o.params; }
};

/// Coordinates of the base vertices, computed from the layout codes alone.
std::vector<Coordinate> assign_coordinates(const Layout& layout, const VariantParams& params);

/// Big-endian bit string ("0101..."): Elias-gamma pair count, then per pair
/// either fixed-width fields (log2 variant) or, for the optimal variant, each
/// code as a gamma-coded path length followed by the shortest path bits that
/// reproduce its value.
std::string encode(const Coordinate& c);
Coordinate decode(const std::string& bits, const VariantParams& params);

/// Most pairs a coordinate may hold for these params.
int max_pairs(const VariantParams& params);

/// Symbolic point of the coordinate; depends only on the pairs and params.
SymPoint to_euclidean(const Coordinate& c);

struct DComparison {
  int h = 0;
  LevelCyclePair s_c, t_c;
  bool s_is_sc = false, t_is_tc = false;
  BigCount l, r, u, d, D;
};

/// Potential left/right/up/down edge counts from s to t.
DComparison compare_D(const Coordinate& s, const Coordinate& t);

std::string dcomparison_to_json(const DComparison& c);

/// Coordinate file: params header, per-vertex bits and pairs, and the
/// skeleton adjacency the router may use.
std::string coordinates_to_json(const std::vector<Coordinate>& coords, const Graph& skeleton,
                                const std::string& config_json = "{}");

struct CoordinateFile {
  VariantParams params;
  std::vector<Coordinate> coords;   // decoded from the bits fields
  std::vector<std::vector<int>> adj;
};

/// Reads a coordinate file, decoding each vertex from its bits field and
/// checking it against the listed pairs (MalformedBits on mismatch).
CoordinateFile coordinates_from_json(const std::string& text);

}  // namespace cactus
