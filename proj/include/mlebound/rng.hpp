#pragma once

#include <cstdint>
#include <random>

namespace mlebound {

/// Independent random stream for one replicate, fully determined by
/// (seed, replicate). Parallel workers never share a stream, so simulated
/// values do not depend on how replicates are scheduled.
class ReplicateStream {
 public:
  ReplicateStream(std::uint64_t seed, std::uint64_t replicate);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal by inversion, portable across standard libraries.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlebound
