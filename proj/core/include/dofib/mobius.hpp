#pragma once

#include <array>
#include <optional>
#include <utility>

#include "dofib/ratfunc.hpp"

namespace dofib {

/// Point of the projective line over the function field, x : y.
/// y = 0 is the point at infinity.
struct ProjPoint {
  RatFunc x;
  RatFunc y;

  static ProjPoint value(RatFunc v);
  static ProjPoint infinity(const RingPtr& ring);
  bool is_infinity() const { return y.is_zero(); }
  /// Affine value x/y; throws DivisionByZero at infinity.
  RatFunc affine() const;
  friend bool operator==(const ProjPoint& a, const ProjPoint& b);
};

using Quadruple = std::array<ProjPoint, 4>;

/// ((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4)); infinity entries follow the
/// homogeneous form. Throws DegenerateQuadruple if two entries coincide.
RatFunc cross_ratio(const Quadruple& q);

/// {c, 1-c, 1/c, 1/(1-c), c/(c-1), (c-1)/c}.
std::array<RatFunc, 6> cross_ratio_orbit(const RatFunc& c);
/// Index in the orbit of `a` at which `b` occurs, if any.
std::optional<int> orbit_position(const RatFunc& a, const RatFunc& b);

/// w -> (a w + b) / (c w + d).
class Mobius {
 public:
  Mobius(RatFunc a, RatFunc b, RatFunc c, RatFunc d);
  static Mobius identity(const RingPtr& ring);
  /// Unique transform sending src[i] to dst[i] for i = 0, 1, 2.
  static Mobius from_pairs(const std::array<ProjPoint, 3>& src, const std::array<ProjPoint, 3>& dst);

  const RatFunc& a() const noexcept { return a_; }
  const RatFunc& b() const noexcept { return b_; }
  const RatFunc& c() const noexcept { return c_; }
  const RatFunc& d() const noexcept { return d_; }

  ProjPoint apply(const ProjPoint& p) const;
  RatFunc apply(const RatFunc& w) const { return apply(ProjPoint::value(w)).affine(); }
  Mobius inverse() const;
  /// (this o other)(w) = this(other(w)).
  Mobius compose(const Mobius& other) const;
  /// Equality as projective transforms (matrices up to a scalar).
  bool equivalent(const Mobius& other) const;

 private:
  RatFunc a_, b_, c_, d_;
};

}  // namespace dofib
