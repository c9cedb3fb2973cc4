#include "mlebound/rng.hpp"

#include "mlebound/wasserstein.hpp"

namespace mlebound {

namespace {
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t replicate) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(replicate), hi(replicate), 0x6d6c65u};
  return std::mt19937_64(seq);
}
}  // namespace

ReplicateStream::ReplicateStream(std::uint64_t seed, std::uint64_t replicate)
    : engine_(seeded_engine(seed, replicate)) {}

double ReplicateStream::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double ReplicateStream::normal() { return std_normal_quantile(uniform()); }

}  // namespace mlebound
