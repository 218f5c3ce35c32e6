#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace keychain {

// Sentinel for "play nothing this round"; distinct from every key id.
inline constexpr int kNullKey = -1;

// Tolerance for probability sum-to-one validation.
inline constexpr double kProbTol = 1e-9;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial generator seed so Monte Carlo results are independent of
// execution order or parallelism degree.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x51ed270b9f5f4b1dULL));
}

}  // namespace keychain
