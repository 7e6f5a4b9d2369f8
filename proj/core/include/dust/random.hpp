#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace dust {

using Rng = std::mt19937_64;

/// Named random streams. A replicate's generator is keyed by
/// (master seed, replicate index, stream), so adding a new consumer never
/// perturbs the draws seen by an existing one.
enum class Stream : std::uint64_t {
  graph = 1,
  ust = 2,
  crt = 3,
  points = 4,
  alpha = 5,
  capacity = 6,
  cut_norm = 7,
  expander = 8,
  goodtree = 9,
};

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// seed = mix64(mix64(master ^ mix64(stream)) + replicate)
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                          Stream stream) noexcept;

inline Rng make_rng(std::uint64_t master, std::uint64_t replicate,
                    Stream stream) {
  return Rng(derive_seed(master, replicate, stream));
}

/// Uniform on the open interval (0, 1); never returns 0 or 1.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound).
inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

/// Number of workers used when the caller passes threads == 0.
unsigned default_threads() noexcept;

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
/// write only to their own slot; the result never depends on `threads`.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace dust
