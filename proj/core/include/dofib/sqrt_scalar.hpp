#pragma once

#include "dofib/ratfunc.hpp"

namespace dofib {

/// coeff * sqrt(radicand), with the radicand a square-free polynomial whose
/// constant is a square-free integer (so -1 stays formal).
class SqrtScalar {
 public:
  SqrtScalar();
  explicit SqrtScalar(RatFunc coeff);
  SqrtScalar(RatFunc coeff, const RatFunc& radicand);

  const RatFunc& coeff() const noexcept { return coeff_; }
  const Poly& radicand() const noexcept { return radicand_; }
  bool is_rational() const { return radicand_.is_one(); }

  /// coeff^2 * radicand.
  RatFunc square() const;
  SqrtScalar operator-() const { return SqrtScalar(-coeff_, radicand_, Normalized{}); }
  friend SqrtScalar operator*(const SqrtScalar& a, const SqrtScalar& b);
  friend bool operator==(const SqrtScalar& a, const SqrtScalar& b) {
    return a.coeff_ == b.coeff_ && a.radicand_ == b.radicand_;
  }
  SqrtScalar substitute(const std::map<std::string, RatFunc>& bindings) const;

  std::string to_string() const;

 private:
  struct Normalized {};
  SqrtScalar(RatFunc coeff, Poly radicand, Normalized)
      : coeff_(std::move(coeff)), radicand_(std::move(radicand)) {}
  RatFunc coeff_;
  Poly radicand_;
};

}  // namespace dofib
