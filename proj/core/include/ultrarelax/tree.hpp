#pragma once

#include <cstdint>
#include <vector>

namespace ultrarelax {

// State space: N disjoint metabasins, each a depth-n quotient of the p-adic
// unit ball. A point is a basin id plus n base-p digits, coarsest first.
// Within one basin the distance between two points is p^{-k}, k = length of
// the common digit prefix; distance across basins is not defined (inter-basin
// moves are graph edges, not metric balls). Haar measure gives each basin
// total mass 1 and each leaf mass p^{-n}.

struct TreeAddress {
  int basin = 0;
  std::vector<std::uint8_t> digits;  // digits[0] is the coarsest level

  int depth() const { return static_cast<int>(digits.size()); }

  friend bool operator==(const TreeAddress&, const TreeAddress&) = default;
};

// Ball of volume p^scale (scale <= 0) inside one basin: every point whose
// first -scale digits equal the first -scale entries of center. scale == 0
// is the whole basin and ignores center.
struct BallSpec {
  int basin = 0;
  std::vector<std::uint8_t> center;
  int scale = 0;

  friend bool operator==(const BallSpec&, const BallSpec&) = default;
};

bool is_prime(int p);

// p^e for small integer arguments, exact.
std::uint64_t ipow(int p, int e);

// p^scale as a double; scale <= 0. Computed as 1/p^{-scale} so the result is
// a single correctly rounded division.
double ball_volume(int p, int scale);

// Haar measure of the set of points at distance exactly p^{-m} from a fixed
// point: p^{-m} - p^{-m-1}. Shells m = 0..n-1 plus the residual leaf mass
// p^{-n} partition a basin.
double shell_measure(int p, int m);

// Ultrametric distance p^{-(common prefix length)}; 0 for equal addresses.
// Throws ConfigError on basin or depth mismatch or digits out of range.
double padic_distance(int p, const TreeAddress& a, const TreeAddress& b);

// Prefix-match membership test. Throws ConfigError on malformed specs.
bool ball_contains(const BallSpec& ball, const TreeAddress& x);

// Validates digits < p, center long enough for the scale, scale <= 0.
void validate_address(int p, const TreeAddress& x);
void validate_ball(int p, const BallSpec& ball);

// Leaf enumeration at quotient depth n (used by the dense oracle and the
// sampler): ordinal = digits read as a base-p number, coarsest digit most
// significant.
std::uint64_t leaf_ordinal(int p, const TreeAddress& x);
TreeAddress leaf_address(int p, int n, int basin, std::uint64_t ordinal);

}  // namespace ultrarelax
