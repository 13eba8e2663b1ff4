#pragma once

#include <map>
#include <string>

#include "dofib/poly.hpp"

namespace dofib {

/// Reduced quotient num/den. The denominator is integer-primitive with a
/// positive leading coefficient; all rational scaling lives in the numerator.
class RatFunc {
 public:
  RatFunc();
  explicit RatFunc(Poly num);
  /// Reduces num/den; throws DivisionByZero when den is zero.
  RatFunc(Poly num, Poly den);
  RatFunc(const RingPtr& ring, const BigRat& c);

  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  const RingPtr& ring() const noexcept { return num_.ring(); }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  BigRat constant_value() const;
  bool involves(std::string_view name) const { return num_.involves(name) || den_.involves(name); }

  RatFunc in_ring(const RingPtr& target) const;

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b);

  RatFunc inverse() const;
  RatFunc pow(int e) const;

  /// Simultaneous substitution of rational functions for variables.
  RatFunc substitute(const std::map<std::string, RatFunc>& bindings) const;

  std::string to_string() const;

  /// Skips the gcd; the caller guarantees num and den are coprime.
  static RatFunc from_reduced(Poly num, Poly den);

 private:
  Poly num_;
  Poly den_;
};

/// Substitutes rational functions into a polynomial; the result is reduced.
RatFunc substitute(const Poly& p, const std::map<std::string, RatFunc>& bindings);

}  // namespace dofib
