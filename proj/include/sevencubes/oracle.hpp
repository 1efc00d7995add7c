#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"

// Brute-force ground truth for small N, and the enumerative fallback used
// below the constructive range.

namespace sevencubes::oracle {

enum class CubeMode { nonnegative, positive };

// Nondecreasing parts; sum of cubes equals the represented value.
struct CubeMultiset {
  std::vector<std::uint64_t> parts;

  std::uint64_t value() const {
    std::uint64_t s = 0;
    for (auto p : parts) s += p * p * p;
    return s;
  }
  friend auto operator<=>(const CubeMultiset&, const CubeMultiset&) = default;
};

inline std::uint64_t icbrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(n)));
  auto cubed = [](std::uint64_t x) { return static_cast<unsigned __int128>(x) * x * x; };
  while (r > 0 && cubed(r) > n) --r;
  while (cubed(r + 1) <= n) ++r;
  return r;
}

namespace detail {

// Parts are chosen largest first, each no larger than the previous one.
template <typename Visit>
bool walk(std::uint64_t rem, unsigned slots, std::uint64_t cap, std::uint64_t min_part, std::vector<std::uint64_t>& stack,
          Visit& visit) {
  if (slots == 0) return rem == 0 ? visit(stack) : false;
  const std::uint64_t floor_cube = min_part * min_part * min_part;
  if (rem < floor_cube * slots) return false;
  std::uint64_t hi = std::min(cap, icbrt_u64(rem - floor_cube * (slots - 1)));
  for (std::uint64_t a = hi + 1; a-- > min_part;) {
    const std::uint64_t a3 = a * a * a;
    if (a3 * slots < rem) break;  // the remaining parts are all <= a
    stack.push_back(a);
    const bool stop = walk(rem - a3, slots - 1, a, min_part, stack, visit);
    stack.pop_back();
    if (stop) return true;
  }
  return false;
}

}  // namespace detail

// All multisets of exactly k cubes (zeros allowed in nonnegative mode)
// summing to n.
inline std::vector<CubeMultiset> enumerate(std::uint64_t n, unsigned k, CubeMode mode) {
  if (k < 1 || k > 9) throw std::invalid_argument("enumerate: k must be in [1, 9]");
  std::vector<CubeMultiset> out;
  std::vector<std::uint64_t> stack;
  auto visit = [&](const std::vector<std::uint64_t>& parts) {
    out.push_back({{parts.rbegin(), parts.rend()}});
    return false;
  };
  detail::walk(n, k, icbrt_u64(n), mode == CubeMode::positive ? 1 : 0, stack, visit);
  std::sort(out.begin(), out.end());
  return out;
}

// Union of enumerate(n, k, mode) for k = 1 .. max_k.
inline std::vector<CubeMultiset> enumerate_up_to(std::uint64_t n, unsigned max_k, CubeMode mode) {
  std::vector<CubeMultiset> out;
  for (unsigned k = 1; k <= max_k; ++k) {
    auto part = enumerate(n, k, mode);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline bool is_sum_of_seven_nonneg(std::uint64_t n) {
  std::vector<std::uint64_t> stack;
  auto found = [](const std::vector<std::uint64_t>&) { return true; };
  return detail::walk(n, 7, icbrt_u64(n), 0, stack, found);
}

// Every n <= bound that is not a sum of seven nonnegative cubes.
inline std::vector<std::uint64_t> scan_exceptional(std::uint64_t bound, std::uint64_t multiples_of = 1) {
  if (multiples_of == 0) throw std::invalid_argument("scan_exceptional: multiples_of must be >= 1");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 0; n <= bound; n += multiples_of) {
    if (!is_sum_of_seven_nonneg(n)) out.push_back(n);
  }
  return out;
}

// Exact distribution of n1^3 + ... + n7^3 mod 9 over all 9^7 residue
// tuples.
inline std::array<Rational, 9> seven_cube_residue_distribution() {
  std::array<Integer, 9> counts{};
  counts[0] = 1;
  for (int step = 0; step < 7; ++step) {
    std::array<Integer, 9> next{};
    for (int r = 0; r < 9; ++r) {
      for (int x = 0; x < 9; ++x) next[(r + x * x * x) % 9] += counts[r];
    }
    counts = next;
  }
  std::array<Rational, 9> out;
  const Integer total = pow_int(Integer(9), 7);
  for (int r = 0; r < 9; ++r) out[r] = make_rational(counts[r], total);
  return out;
}

enum class FallbackMode { seven_positive, at_most_seven };

struct FallbackResult {
  std::array<Integer, 7> cubes;  // nonincreasing bases
  FallbackMode mode = FallbackMode::seven_positive;
};

struct FallbackOptions {
  unsigned width = 40;
  std::uint64_t node_budget = 20'000'000;
};

namespace detail {

class Descent {
 public:
  Descent(const FallbackOptions& options, unsigned min_part) : options_(options), min_part_(min_part) {}

  bool run(const Integer& n) { return descend(n, 7, icbrt(n)); }

  const std::vector<Integer>& parts() const { return parts_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool descend(const Integer& rem, unsigned level, const Integer& cap) {
    if (++nodes_ > options_.node_budget) return false;
    if (level == 1) {
      Integer a = icbrt(rem);
      if (cube(a) != rem || a < min_part_ || a > cap) return false;
      parts_.push_back(a);
      return true;
    }
    const Integer reserve = Integer(min_part_) * (level - 1);  // min_part^3 == min_part for 0 and 1
    if (rem < reserve) return false;
    Integer hi = icbrt(rem - reserve);
    if (hi > cap) hi = cap;
    // level * a^3 >= rem, since later parts never exceed a
    Integer lo = icbrt(rem / level);
    while (cube(lo) * level < rem) ++lo;
    if (lo < min_part_) lo = min_part_;
    Integer a = hi;
    for (unsigned tried = 0; tried < options_.width && a >= lo; ++tried, --a) {
      Integer next = rem - cube(a);
      auto key = std::make_tuple(next.get_str(16), level - 1, a.get_str(16));
      if (failed_.contains(key)) continue;
      parts_.push_back(a);
      if (descend(next, level - 1, a)) return true;
      parts_.pop_back();
      if (nodes_ > options_.node_budget) return false;
      failed_.insert(std::move(key));
    }
    return false;
  }

  FallbackOptions options_;
  unsigned min_part_;
  std::vector<Integer> parts_;
  std::set<std::tuple<std::string, unsigned, std::string>> failed_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

// Greedy descent with bounded backtracking: at each of the seven levels
// try the `width` largest admissible cubes, memoizing failed
// (remainder, level, cap) states. If no seven positive cubes exist, the
// same search is rerun allowing zeros and the result is flagged
// at_most_seven.
inline FallbackResult fallback_decompose(const Integer& n, const FallbackOptions& options = {}) {
  if (sgn(n) < 0) throw std::invalid_argument("fallback_decompose: n must be >= 0");
  std::uint64_t explored = 0;
  for (unsigned min_part : {1u, 0u}) {
    detail::Descent search(options, min_part);
    if (search.run(n)) {
      FallbackResult result;
      std::copy(search.parts().begin(), search.parts().end(), result.cubes.begin());
      result.mode = min_part == 1 ? FallbackMode::seven_positive : FallbackMode::at_most_seven;
      return result;
    }
    explored += search.nodes();
  }
  throw SearchExhausted("fallback search exhausted for N = " + n.get_str() + " after " + std::to_string(explored) +
                        " nodes (width " + std::to_string(options.width) + ")");
}

}  // namespace sevencubes::oracle
