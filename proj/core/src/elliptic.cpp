#include "dofib/elliptic.hpp"

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"

namespace dofib {

namespace {

RatFunc constant(const RingPtr& r, long c) { return RatFunc(r, BigRat(c)); }

RingPtr common_ring(std::initializer_list<const RatFunc*> xs) {
  RingPtr r = (*xs.begin())->ring();
  for (auto* x : xs) r = unite(r, x->ring());
  return r;
}

// t-free part of a plane in coordinates (x, y, z, t).
RatFunc base_part(const OcticArrangement& arr, std::size_t i) {
  LinearForm f = arr.plane(i);
  f.c[3] = RatFunc(Poly(arr.ring()));
  return f.expression(arr.ring(), arr.vars());
}

void require_t_coefficient(const OcticArrangement& arr, std::size_t i, long expected) {
  const RatFunc& c = arr.plane(i).c[3];
  if (!(c == constant(arr.ring(), expected))) {
    throw NotNormalized("plane " + std::to_string(i + 1) + " must have t-coefficient " +
                        std::to_string(expected));
  }
}

int poly_valuation(Poly f, const Poly& prime) {
  if (f.is_zero()) return -1;
  int v = 0;
  while (true) {
    auto q = f.divide_exact(prime);
    if (!q) return v;
    f = std::move(*q);
    ++v;
  }
}

}  // namespace

RatFunc WeierstrassInvariants::j() const { return J * constant(J.ring(), 1728); }

namespace {

// c4^3 / (c4^3 - c6^2) without a gcd of the full-size numerator and
// denominator. J is unchanged by (c4, c6) -> (s^2 c4, s^3 c6), so clear
// denominators first. With A = g u, C = g w and g = gcd(A, C), the common
// factor of A^3 and A^3 - C^2 is g^2 h k, h = gcd(g, w), k = gcd(g / h, w).
RatFunc c4_cubed_over_disc(const RatFunc& c4, const RatFunc& c6) {
  const RingPtr r = c4.num().ring();
  if (c4.is_zero()) return RatFunc(r, BigRat(0));
  if (c6.is_zero()) return RatFunc(r, BigRat(1));
  const Poly d6sq = c6.den() * c6.den();
  const Poly A = c4.num() * c4.den() * d6sq;
  const Poly C = c6.num() * c4.den().pow(3) * d6sq;
  const Poly g = gcd(A, C);
  const Poly u = A.exact_quotient(g), w = C.exact_quotient(g);
  const Poly h = gcd(g, w);
  const Poly gh = g.exact_quotient(h);
  const Poly k = gcd(gh, w);
  const Poly u3 = u.pow(3);
  return RatFunc::from_reduced(gh.exact_quotient(k) * u3, (g * u3 - w * w).exact_quotient(h * k));
}

}  // namespace

WeierstrassInvariants WeierstrassModel::invariants() const {
  const RingPtr r = common_ring({&f6, &f12, &f18});
  const RatFunc b2 = constant(r, 4) * f6;
  const RatFunc b4 = constant(r, 2) * f12;
  const RatFunc b6 = constant(r, 4) * f18;
  WeierstrassInvariants inv;
  inv.c4 = b2 * b2 - constant(r, 24) * b4;
  inv.c6 = -(b2 * b2 * b2) + constant(r, 36) * b2 * b4 - constant(r, 216) * b6;
  const RatFunc c4cubed = inv.c4 * inv.c4 * inv.c4;
  inv.disc = (c4cubed - inv.c6 * inv.c6) * RatFunc(r, BigRat(1, 1728));
  if (inv.disc.is_zero()) throw SingularModel("Weierstrass model has zero discriminant");
  inv.J = c4_cubed_over_disc(inv.c4, inv.c6);
  return inv;
}

RatFunc WeierstrassModel::cubic(const std::string& fiber) const {
  RingPtr r = unite(common_ring({&f6, &f12, &f18}), make_ring({fiber}));
  RatFunc t(Poly::variable(r, fiber));
  return t * t * t + f6.in_ring(r) * t * t + f12.in_ring(r) * t + f18.in_ring(r);
}

WeierstrassModel model_from_roots(const std::array<RatFunc, 3>& r, std::vector<std::string> base) {
  return {std::move(base), r[0] + r[1] + r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], r[0] * r[1] * r[2]};
}

WeierstrassModel quadratic_twist(const WeierstrassModel& m, const RatFunc& d) {
  if (d.is_zero()) throw DegenerateInput("quadratic twist by zero");
  return {m.base, d * m.f6, d * d * m.f12, d * d * d * m.f18};
}

QuarticToCubic quartic_to_cubic(const GenusOneQuartic& q, const RingPtr& ring, const std::string& t,
                                const std::string& u, std::size_t moved) {
  if (moved > 3) throw DegenerateInput("root index out of range");
  std::array<RatFunc, 3> other;
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i != moved) other[k++] = q.roots[i];
  }
  const RatFunc& d = q.roots[moved];
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (q.roots[i] == q.roots[j]) throw DegenerateQuadruple("quartic has a repeated root");
    }
  }
  const RatFunc ad = other[0] - d, bd = other[1] - d, cd = other[2] - d;
  QuarticToCubic out;
  out.cubic_roots = {bd * cd, ad * cd, ad * bd};
  out.model = quadratic_twist(model_from_roots(out.cubic_roots, {}), q.multiplier);
  const RatFunc K = ad * bd * cd;
  RingPtr r = unite(unite(ring, K.ring()), make_ring({t, u}));
  const RatFunc tv(Poly::variable(r, t)), uv(Poly::variable(r, u));
  const RatFunc shift = tv + d.in_ring(r);
  out.new_t = K.in_ring(r) / shift;
  out.new_u = K.in_ring(r) * uv / (shift * shift);
  return out;
}

WeierstrassModel fivefold_model(const std::array<RatFunc, 5>& P, const std::array<RatFunc, 3>& F,
                                std::vector<std::string> base) {
  if (F[0] == F[1] || F[0] == F[2] || F[1] == F[2]) {
    throw DegenerateFibration("two of the planes off the point coincide on the base");
  }
  RatFunc prod = P[0] * P[1] * P[2] * P[3] * P[4];
  return model_from_roots({prod * F[0], prod * F[1], prod * F[2]}, std::move(base));
}

WeierstrassModel fourfold_model(const std::array<RatFunc, 4>& P, const std::array<RatFunc, 4>& F,
                                std::vector<std::string> base) {
  // The quartic prod (F_i + t) with F_5 sent to infinity, twisted by P.
  GenusOneQuartic q{{F[3], F[2], F[1], F[0]}, P[0] * P[1] * P[2] * P[3]};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (F[i] == F[j]) throw DegenerateFibration("two of the planes off the point coincide on the base");
    }
  }
  const RatFunc& a = q.roots[0];
  const RatFunc& b = q.roots[1];
  const RatFunc& c = q.roots[2];
  const RatFunc& d = q.roots[3];
  const RatFunc& s = q.multiplier;
  return model_from_roots({s * (b - d) * (c - d), s * (a - d) * (c - d), s * (a - d) * (b - d)},
                          std::move(base));
}

WeierstrassModel from_fivefold(const OcticArrangement& arr) {
  for (std::size_t i = 0; i < 5; ++i) require_t_coefficient(arr, i, 0);
  for (std::size_t i = 5; i < 8; ++i) require_t_coefficient(arr, i, 1);
  std::vector<std::string> base(arr.vars().begin(), arr.vars().begin() + 3);
  WeierstrassModel m = fivefold_model(
      {base_part(arr, 0), base_part(arr, 1), base_part(arr, 2), base_part(arr, 3), base_part(arr, 4)},
      {base_part(arr, 5), base_part(arr, 6), base_part(arr, 7)}, base);
  return arr.scale().is_constant() && arr.scale().constant_value() == 1 ? m
                                                                        : quadratic_twist(m, arr.scale());
}

WeierstrassModel from_fourfold(const OcticArrangement& arr) {
  for (std::size_t i = 0; i < 4; ++i) require_t_coefficient(arr, i, 0);
  for (std::size_t i = 4; i < 8; ++i) require_t_coefficient(arr, i, 1);
  std::vector<std::string> base(arr.vars().begin(), arr.vars().begin() + 3);
  WeierstrassModel m = fourfold_model(
      {base_part(arr, 0), base_part(arr, 1), base_part(arr, 2), base_part(arr, 3)},
      {base_part(arr, 4), base_part(arr, 5), base_part(arr, 6), base_part(arr, 7)}, base);
  return arr.scale().is_constant() && arr.scale().constant_value() == 1 ? m
                                                                        : quadratic_twist(m, arr.scale());
}

WeierstrassModel skew_model(const std::array<RatFunc, 4>& F, const std::array<RatFunc, 4>& G,
                            std::vector<std::string> base) {
  auto br = [&](int i, int j) { return F[i] * G[j] - F[j] * G[i]; };
  // indices: 5 -> 0, ..., 8 -> 3
  RatFunc e2 = br(1, 3) * br(0, 2);
  RatFunc e3 = br(1, 2) * br(0, 3);
  return model_from_roots({RatFunc(Poly(e2.ring())), -e2, -e3}, std::move(base));
}

WeierstrassModel from_skew_lines(const OcticArrangement& arr, const std::array<std::string, 3>& base) {
  // The first four planes must be nonzero multiples of x, y, z, t.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      const bool zero = arr.plane(i).c[k].is_zero();
      if ((k == i) == zero) throw NotNormalized("the first four planes must be the coordinates x, y, z, t");
    }
  }
  std::vector<std::string> names(base.begin(), base.end());
  names.insert(names.end(), arr.params().begin(), arr.params().end());
  RingPtr r = make_ring(names);
  const RatFunc al(Poly::variable(r, base[0]));
  const RatFunc be(Poly::variable(r, base[1]));
  const RatFunc ga(Poly::variable(r, base[2]));
  const RatFunc zero{Poly(r)};
  std::array<RatFunc, 4> F, G;
  for (std::size_t i = 0; i < 4; ++i) {
    const LinearForm& f = arr.plane(4 + i);
    F[i] = f.eval(std::array<RatFunc, 4>{ga, be, zero, zero}).in_ring(r);
    G[i] = f.eval(std::array<RatFunc, 4>{zero, zero, al, ga}).in_ring(r);
  }
  return skew_model(F, G, names);
}

int valuation(const RatFunc& f, const Poly& prime) {
  if (f.is_zero()) return -1;
  return poly_valuation(f.num(), prime) - poly_valuation(f.den(), prime);
}

namespace {

KodairaFiber classify_along(const WeierstrassInvariants& inv, const Poly& line) {
  KodairaFiber out;
  out.line = line;
  int a = valuation(inv.c4, line), b = valuation(inv.c6, line), d = valuation(inv.disc, line);
  const int big = 1 << 20;
  int ea = a < 0 ? big : a, eb = b < 0 ? big : b;
  while (ea >= 4 && eb >= 6 && d >= 12) {
    ea -= 4;
    eb -= 6;
    d -= 12;
  }
  out.v_c4 = a < 0 ? -1 : ea;
  out.v_c6 = b < 0 ? -1 : eb;
  out.v_disc = d;
  if (d == 0) {
    out.type = "I0";
  } else if (ea == 0) {
    out.type = "I" + std::to_string(d);
  } else if (ea == 2 && eb == 3 && d >= 6) {
    out.type = "I" + std::to_string(d - 6) + "*";
  } else {
    switch (d) {
      case 2: out.type = "II"; break;
      case 3: out.type = "III"; break;
      case 4: out.type = "IV"; break;
      case 6: out.type = "I0*"; break;
      case 8: out.type = "IV*"; break;
      case 9: out.type = "III*"; break;
      case 10: out.type = "II*"; break;
      default: throw DegenerateFibration("valuations (" + std::to_string(ea) + ", " + std::to_string(eb) +
                                         ", " + std::to_string(d) + ") do not match the Kodaira table");
    }
  }
  return out;
}

}  // namespace

KodairaFiber kodaira_along(const WeierstrassInvariants& inv, const Poly& line,
                           const std::vector<std::string>& base) {
  if (base.empty()) {
    if (line.total_degree() != 1 || !line.is_homogeneous()) {
      throw LineNotLinear("kodaira_along needs a homogeneous linear form, got " + line.to_string());
    }
    return classify_along(inv, line);
  }
  // Coefficients may involve the parameters; linearity is checked in the base only.
  std::vector<std::size_t> vars;
  for (const auto& name : base) {
    if (auto i = line.ring()->index_of(name)) vars.push_back(*i);
  }
  if (line.homogeneous_degree(vars) != std::optional<std::uint32_t>(1)) {
    throw LineNotLinear("kodaira_along needs a form linear in the base, got " + line.to_string());
  }
  return classify_along(inv, line);
}

KodairaFiber kodaira_along(const WeierstrassModel& m, const Poly& line) {
  return kodaira_along(m.invariants(), line, m.base);
}

}  // namespace dofib
