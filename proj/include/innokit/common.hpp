#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace innokit {

// Absolute tolerance used for probability comparisons unless a caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

// Cap on enumeration work (visited search nodes) for the exhaustive solvers.
inline constexpr std::uint64_t kDefaultWorkLimit = 10'000'000;

using RngSeed = std::uint64_t;

// Input violates a documented precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested structure provably does not exist (e.g. no coupling with B outputs).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration hit its configured work limit before finishing.
class WorkLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point bookkeeping drifted past the guard threshold.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seeded 53-bit uniform stream. The extraction is pinned (not delegated to
// std::uniform_real_distribution) so identical seeds give identical streams
// on every platform.
class UniformSource {
 public:
  explicit UniformSource(RngSeed seed) : engine_(seed) {}

  // Uniform draw in [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace innokit
