#include "dofib/sqrt_scalar.hpp"

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"

namespace dofib {

SqrtScalar::SqrtScalar() : coeff_(), radicand_(coeff_.ring(), BigRat(1)) {}

SqrtScalar::SqrtScalar(RatFunc coeff)
    : coeff_(std::move(coeff)), radicand_(coeff_.ring(), BigRat(1)) {}

SqrtScalar::SqrtScalar(RatFunc coeff, const RatFunc& radicand) {
  if (radicand.is_zero()) {
    coeff_ = RatFunc(Poly(unite(coeff.ring(), radicand.ring())));
    radicand_ = Poly(coeff_.ring(), BigRat(1));
    return;
  }
  // sqrt(n/d) = sqrt(n*d) / d
  const Poly& d = radicand.den();
  Poly nd = radicand.num() * d;
  SquareSplit split = extract_square(nd);
  Poly prim = split.squarefree.primitive();
  BigRat signed_k = split.squarefree.leading_coeff() / prim.leading_coeff();
  // signed_k = a/b: sqrt(a/b) = sqrt(a*b)/b
  BigInt ab = signed_k.get_num() * signed_k.get_den();
  auto [sq, free] = split_square(ab);
  BigRat outer = BigRat(sq) / BigRat(signed_k.get_den());
  coeff_ = coeff * RatFunc(split.root * outer, d);
  radicand_ = prim * BigRat(free);
}

RatFunc SqrtScalar::square() const { return coeff_ * coeff_ * RatFunc(radicand_); }

SqrtScalar operator*(const SqrtScalar& a, const SqrtScalar& b) {
  if (a.is_rational()) return SqrtScalar(a.coeff_ * b.coeff_, b.radicand_, SqrtScalar::Normalized{});
  if (b.is_rational()) return SqrtScalar(a.coeff_ * b.coeff_, a.radicand_, SqrtScalar::Normalized{});
  // sqrt(r1) sqrt(r2) = g sqrt(r1/g * r2/g) with g = gcd(r1, r2).
  Poly g = gcd(a.radicand_, b.radicand_);
  Poly r1 = a.radicand_.exact_quotient(g);
  Poly r2 = b.radicand_.exact_quotient(g);
  // Principal branches: sqrt(-m) sqrt(-n) = -sqrt(mn) for positive m, n.
  RatFunc c = a.coeff_ * b.coeff_ * RatFunc(g);
  if (a.radicand_.is_constant() && b.radicand_.is_constant() && a.radicand_.leading_coeff() < 0 &&
      b.radicand_.leading_coeff() < 0) {
    c = -c;
  }
  return SqrtScalar(std::move(c), RatFunc(r1 * r2));
}

SqrtScalar SqrtScalar::substitute(const std::map<std::string, RatFunc>& bindings) const {
  return SqrtScalar(coeff_.substitute(bindings), dofib::substitute(radicand_, bindings));
}

std::string SqrtScalar::to_string() const {
  if (is_rational()) return coeff_.to_string();
  return "(" + coeff_.to_string() + ")*sqrt(" + radicand_.to_string() + ")";
}

}  // namespace dofib
