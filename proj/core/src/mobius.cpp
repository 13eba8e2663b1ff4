#include "dofib/mobius.hpp"

#include "dofib/errors.hpp"

namespace dofib {

namespace {

RatFunc bracket(const ProjPoint& p, const ProjPoint& q) { return p.x * q.y - q.x * p.y; }

RatFunc one_in(const RingPtr& r) { return RatFunc(r, BigRat(1)); }

}  // namespace

ProjPoint ProjPoint::value(RatFunc v) {
  RatFunc one = one_in(v.ring());
  return {std::move(v), std::move(one)};
}

ProjPoint ProjPoint::infinity(const RingPtr& ring) { return {one_in(ring), RatFunc(Poly(ring))}; }

RatFunc ProjPoint::affine() const {
  if (is_infinity()) throw DivisionByZero("affine value of the point at infinity");
  return x / y;
}

bool operator==(const ProjPoint& a, const ProjPoint& b) { return bracket(a, b).is_zero(); }

RatFunc cross_ratio(const Quadruple& q) {
  for (int i = 0; i < 4; ++i) {
    if (q[i].x.is_zero() && q[i].y.is_zero()) throw DegenerateQuadruple("entry is 0:0");
    for (int j = i + 1; j < 4; ++j) {
      if (q[i] == q[j]) {
        throw DegenerateQuadruple("entries " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                  " coincide");
      }
    }
  }
  return bracket(q[0], q[2]) * bracket(q[1], q[3]) / (bracket(q[1], q[2]) * bracket(q[0], q[3]));
}

std::array<RatFunc, 6> cross_ratio_orbit(const RatFunc& c) {
  RatFunc one = one_in(c.ring());
  RatFunc m = one - c;
  return {c, m, c.inverse(), m.inverse(), c / (c - one), (c - one) / c};
}

std::optional<int> orbit_position(const RatFunc& a, const RatFunc& b) {
  auto orbit = cross_ratio_orbit(a);
  for (int i = 0; i < 6; ++i) {
    if (orbit[i] == b) return i;
  }
  return std::nullopt;
}

Mobius::Mobius(RatFunc a, RatFunc b, RatFunc c, RatFunc d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if ((a_ * d_ - b_ * c_).is_zero()) throw DegenerateInput("singular Mobius matrix");
}

Mobius Mobius::identity(const RingPtr& ring) {
  return Mobius(one_in(ring), RatFunc(Poly(ring)), RatFunc(Poly(ring)), one_in(ring));
}

Mobius Mobius::from_pairs(const std::array<ProjPoint, 3>& src, const std::array<ProjPoint, 3>& dst) {
  auto check = [](const std::array<ProjPoint, 3>& p) {
    if (p[0] == p[1] || p[0] == p[2] || p[1] == p[2]) {
      throw DegenerateQuadruple("Mobius pairs need pairwise distinct points");
    }
  };
  check(src);
  check(dst);
  // w -> [z2,z3][w,z1] / ([z2,z1][w,z3]) sends z1, z2, z3 to 0, 1, infinity.
  auto normalizer = [](const std::array<ProjPoint, 3>& z) {
    RatFunc d23 = bracket(z[1], z[2]);
    RatFunc d21 = bracket(z[1], z[0]);
    return Mobius(d23 * z[0].y, -(d23 * z[0].x), d21 * z[2].y, -(d21 * z[2].x));
  };
  return normalizer(dst).inverse().compose(normalizer(src));
}

ProjPoint Mobius::apply(const ProjPoint& p) const {
  return {a_ * p.x + b_ * p.y, c_ * p.x + d_ * p.y};
}

Mobius Mobius::inverse() const { return Mobius(d_, -b_, -c_, a_); }

Mobius Mobius::compose(const Mobius& o) const {
  return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                c_ * o.b_ + d_ * o.d_);
}

bool Mobius::equivalent(const Mobius& o) const {
  const RatFunc m1[4] = {a_, b_, c_, d_};
  const RatFunc m2[4] = {o.a_, o.b_, o.c_, o.d_};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (!(m1[i] * m2[j] - m1[j] * m2[i]).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace dofib
