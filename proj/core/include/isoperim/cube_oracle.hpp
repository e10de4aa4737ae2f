#pragma once

// Exact checks of the cube-level statements on small Hamming cubes: the
// square-root isoperimetric inequality and its Bellman form, the sharpened
// classical inequality, the partition inequality, the L1 Poincare inequality,
// the low-noise behaviour of the noise operator, and Hamming-ball profiles.
//
// Sets use 0/1 membership; the noise-operator code uses +-1 valued tables.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "isoperim/interval.hpp"
#include "isoperim/rational.hpp"
#include "isoperim/report.hpp"

namespace isoperim {

inline constexpr int kMaxCubeDim = 26;

class CubeSet {
 public:
  // Empty subset of {0,1}^n.
  explicit CubeSet(int n);
  // Bit x of mask is membership of x; needs n <= 6.
  static CubeSet from_mask(int n, std::uint64_t mask);
  static CubeSet from_indicator(int n, const std::vector<int>& f);
  // {x : x & fixed_mask == fixed_values}.
  static CubeSet subcube(int n, std::uint32_t fixed_mask, std::uint32_t fixed_values);
  // {x : |x xor center| <= r}.
  static CubeSet hamming_ball(int n, int r, std::uint32_t center = 0);

  int n() const { return n_; }
  std::uint64_t points() const { return std::uint64_t{1} << n_; }
  bool contains(std::uint32_t x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void insert(std::uint32_t x) { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void erase(std::uint32_t x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }
  std::uint64_t count() const;
  Rational measure() const;
  CubeSet complement() const;
  CubeSet operator|(const CubeSet& other) const;
  // Hex bitmask, most significant word first.
  std::string hex() const;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

bool is_subcube(const CubeSet& a);

struct BoundaryProfile {
  int n = 0;
  std::vector<std::uint8_t> h;       // h_A
  std::vector<std::uint8_t> h_comp;  // h_{A^c}
  // hist[k] = #{x in A : h_A(x) = k}; hist_comp likewise for the complement.
  std::array<std::uint64_t, kMaxCubeDim + 1> hist{};
  std::array<std::uint64_t, kMaxCubeDim + 1> hist_comp{};
  std::uint64_t size = 0;
  std::uint64_t boundary_points = 0;  // |dA| 2^n
  std::uint64_t cut_edges = 0;        // edges between A and its complement

  Rational measure() const;
  Rational boundary_measure() const;  // |dA|
  Rational edge_cut() const;          // |grad(A, A^c)|, which also equals E h_A
  int sensitivity(std::uint32_t x) const { return h[x] + h_comp[x]; }
  Interval sqrt_moment() const;       // E sqrt(h_A)
  Interval sqrt_moment_comp() const;  // E sqrt(h_{A^c})
};

BoundaryProfile boundary_profile(const CubeSet& a);

// E sqrt(k) under the histogram, divided by 2^n.
Interval histogram_sqrt_mean(const std::array<std::uint64_t, kMaxCubeDim + 1>& hist, int n);

struct CubeCheckOptions {
  // 0 means exhaustive (only allowed within the exhaustive limit).
  int sample = 0;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Exhaustive limits of the individual checks.
inline constexpr int kExhaustiveSets = 4;
inline constexpr int kExhaustivePartitions = 4;
inline constexpr int kSampledMax = 20;

// E sqrt(h_A) >= |A| sqrt(log2(1/|A|)) for |A| <= 1/2 and E sqrt(h_A) >= B(|A|)
// for all A, with equality (to 1e-12) required exactly on subcubes.
Report check_main_theorem(int n, const CubeCheckOptions& options = {});
// E h_A >= (|A| / |dA|) |A| log2(1/|A|) for 0 < |A| <= 1/2.
Report check_sharpening(int n);
// |grad(A,B)| + sqrt(n) |W| >= 1/2 over partitions with |A| = 1/2.
Report check_kahn_park(int n);
// ||grad f||_1 >= ||f - E f||_1 for f: {0,1}^n -> {0,1}, equality exactly on
// half-cube indicators (and constants).
Report check_poincare(int n);

// Hamming ball {|x| <= r}: only the layer |x| = r has boundary, with h = n - r.
struct BallProfile {
  Interval measure;
  Interval moment;  // E h^beta
  // moment / (measure log2(1/measure)^beta); needs measure < 1.
  Interval normalized;
};
BallProfile hamming_ball_profile(long n, long r, const Interval& beta);
// Normalized moment at r = floor(n/2) strictly decreasing along ns.
Report check_ball_sharpness(const Interval& beta, const std::vector<long>& ns);

// T_rho applied one coordinate at a time.
std::vector<long double> noise_operator(const std::vector<long double>& f, int n, long double rho);

std::vector<int> dictator(int n, int coord = 0);  // +-1 valued
std::vector<int> majority(int n);                 // +-1 valued, n odd
std::vector<int> random_balanced(int n, std::mt19937_64& rng);

struct HellingerRow {
  double p = 0;
  long double ratio = 0;
  long double deviation = 0;
};
struct HellingerTable {
  Interval sqrt_sensitivity;  // E sqrt(s_f)
  std::vector<HellingerRow> rows;
};
HellingerTable hellinger_table(const std::vector<int>& f, int n, const std::vector<double>& p_list);
// Checks deviation(p_{k+1}) <= deviation(p_k) / 5 along the list.
Report hellinger_lownoise_check(const std::string& label, const std::vector<int>& f, int n,
                                const std::vector<double>& p_list);
// E sqrt(s_f) >= 1 for every balanced f on {0,1}^n.
Report check_balanced_sensitivity(int n);
// Majority (odd n), `sample` random balanced functions, and for n <= 3 the
// exhaustive sensitivity bound.
Report check_hellinger(int n, const CubeCheckOptions& options = {});

}  // namespace isoperim
