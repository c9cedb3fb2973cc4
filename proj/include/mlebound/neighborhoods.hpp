#pragma once

#include <cstddef>
#include <cstdint>

namespace mlebound {

// Closed, 1-based index interval [first, last].
struct Interval {
  std::size_t first = 1;
  std::size_t last = 0;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::size_t i) const { return i >= first && i <= last; }
  bool contains(const Interval& other) const {
    return other.first >= first && other.last <= last;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Dependency neighbourhoods for a 2m-dependent family xi_1..xi_n.
///
/// A_i is the radius-2m window around i and B_i the radius-4m window, both
/// clipped to {1..n}. xi_i is independent of everything outside A_i, and
/// xi_{A_i} of everything outside B_i. The system only stores (n, m); the
/// intervals are produced on demand, so n may be very large.
class NeighborhoodSystem {
 public:
  NeighborhoodSystem(std::size_t n, std::size_t m);

  std::size_t size() const { return n_; }
  std::size_t range() const { return m_; }

  Interval A(std::size_t i) const;
  Interval B(std::size_t i) const;

  // Radii of the unclipped windows.
  std::size_t inner_radius() const { return 2 * m_; }
  std::size_t outer_radius() const { return 4 * m_; }

 private:
  Interval window(std::size_t i, std::size_t radius) const;

  std::size_t n_;
  std::size_t m_;
};

// Throws std::invalid_argument for n == 0.
NeighborhoodSystem build_neighborhoods(std::size_t n, std::size_t m);

}  // namespace mlebound
