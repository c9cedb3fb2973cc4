#include "mlebound/neighborhoods.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mlebound {

NeighborhoodSystem::NeighborhoodSystem(std::size_t n, std::size_t m) : n_(n), m_(m) {
  if (n == 0) throw std::invalid_argument("neighborhood system needs n >= 1");
}

Interval NeighborhoodSystem::window(std::size_t i, std::size_t radius) const {
  if (i < 1 || i > n_) {
    throw std::out_of_range("index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }
  const std::size_t first = i > radius ? i - radius : 1;
  const std::size_t last = std::min(n_, i + radius);
  return {std::max<std::size_t>(first, 1), last};
}

Interval NeighborhoodSystem::A(std::size_t i) const { return window(i, inner_radius()); }

Interval NeighborhoodSystem::B(std::size_t i) const { return window(i, outer_radius()); }

NeighborhoodSystem build_neighborhoods(std::size_t n, std::size_t m) {
  return NeighborhoodSystem(n, m);
}

}  // namespace mlebound
