#pragma once

#include <cstdint>
#include <random>

namespace siren {

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t
{
  design = 1,
  noise = 2,
  aux_design = 3
};

//! Seed for one (n, replication, stream) cell; independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n, std::uint64_t rep,
                                 Stream stream)
{
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ rep);
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t n, std::uint64_t rep,
                                Stream stream)
{
  return std::mt19937_64(derive_seed(base, n, rep, stream));
}

} // namespace siren
