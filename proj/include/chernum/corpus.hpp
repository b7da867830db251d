#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chernum/polysys.hpp"
#include "chernum/random.hpp"

namespace chernum::corpus {

struct ExampleSpec {
  std::string name;
  int ambient_dim = 0;  // r, for P^r
  int expected_dimension = 0;
  std::optional<std::vector<std::int64_t>> expected_chern;  // [deg c_0, ..., deg c_n]
  std::uint64_t seed = 0;
};

const std::vector<ExampleSpec>& inventory();
const ExampleSpec& spec(std::string_view name);

// (x^2 - wy, y^2 - xz, wz - xy) in C[w,x,y,z].
PolySystem twisted_cubic();

// The five 4x4 minors of a random 4x5 matrix of linear forms in six variables.
PolySystem determinantal_threefold(Rng& rng);

// The six 2x2 minors of the 2x4 Segre matrix in P^7 followed by one random hyperplane.
PolySystem segre_section(Rng& rng);

struct NegativeCase {
  PolySystem ideal;
  std::vector<int> degrees;  // the degree request that violates the degree floor
};

// Conic (plane P, quadric Q) in P^3 with the request (3,1,1).
NegativeCase conic_negative_case();

// Curve cut out by a random cubic and the 2x2 minors of a random 2x3 matrix of linear forms
// in P^4, with the request (4,2,2,2).
NegativeCase minors_curve_negative_case(Rng& rng);

// Builds an example by name from its seed. Throws InputError on unknown names.
PolySystem build(std::string_view name, std::uint64_t seed);
PolySystem build(std::string_view name);

// Reads a system file; InputError on unreadable or malformed files.
PolySystem load_ideal(const std::filesystem::path& path);

std::map<int, int> degree_histogram(const PolySystem& sys);

}  // namespace chernum::corpus
