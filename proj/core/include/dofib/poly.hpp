#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace dofib {

namespace detail {
struct PolyAccess;
}

using BigInt = mpz_class;
// GMP keeps mpq_class canonical (reduced, positive denominator, 0 == 0/1)
// after every arithmetic operation.
using BigRat = mpq_class;

/// Ordered list of variable names. The order fixes the graded-lex term order.
class Ring {
 public:
  explicit Ring(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const Ring& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> names);
/// Variables of `a` in order, followed by the variables of `b` not in `a`.
RingPtr unite(const RingPtr& a, const RingPtr& b);
bool same_ring(const RingPtr& a, const RingPtr& b);

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted in descending graded-lex order (total degree first,
/// then lexicographic in ring order) with no zero coefficients. Each term's
/// exponent row is stored as [total degree, e_0, ..., e_{n-1}] in one flat
/// array, so monomial comparison is plain lexicographic comparison of rows.
class Poly {
 public:
  using Exp = std::uint32_t;

  Poly();
  explicit Poly(RingPtr ring);
  Poly(RingPtr ring, const BigRat& constant);
  Poly(RingPtr ring, long constant) : Poly(std::move(ring), BigRat(constant)) {}

  static Poly variable(const RingPtr& ring, std::string_view name);
  static Poly variable(const RingPtr& ring, std::size_t index);
  /// c * x^exps, exps indexed by ring variable.
  static Poly monomial(const RingPtr& ring, std::span<const Exp> exps, const BigRat& c);

  const RingPtr& ring() const noexcept { return ring_; }
  std::size_t nvars() const noexcept { return ring_->size(); }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept;
  bool is_one() const;
  /// Value of a constant polynomial (0 for the zero polynomial).
  BigRat constant_value() const;

  const BigRat& coeff(std::size_t term) const { return coeffs_[term]; }
  std::span<const Exp> exps(std::size_t term) const {
    return {exps_.data() + term * stride() + 1, nvars()};
  }
  Exp term_degree(std::size_t term) const { return exps_[term * stride()]; }

  const BigRat& leading_coeff() const;
  std::uint32_t total_degree() const;
  std::uint32_t degree(std::size_t var) const;
  std::uint32_t min_degree(std::size_t var) const;
  /// Indices of variables occurring with positive exponent.
  std::vector<std::size_t> support() const;
  bool involves(std::size_t var) const { return degree(var) > 0; }
  bool involves(std::string_view name) const;
  bool is_homogeneous() const;
  /// Homogeneous degree in the listed variables, nullopt if not homogeneous.
  std::optional<std::uint32_t> homogeneous_degree(std::span<const std::size_t> vars) const;

  /// Same polynomial expressed over `target`, which must contain every
  /// variable this polynomial actually uses.
  Poly in_ring(const RingPtr& target) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  Poly& operator*=(const BigRat& c);
  friend Poly operator+(Poly lhs, const Poly& rhs) { return lhs += rhs; }
  friend Poly operator-(Poly lhs, const Poly& rhs) { return lhs -= rhs; }
  friend Poly operator*(const Poly& lhs, const Poly& rhs);
  friend Poly operator*(Poly lhs, const BigRat& c) { return lhs *= c; }
  friend Poly operator*(const BigRat& c, Poly rhs) { return rhs *= c; }
  friend bool operator==(const Poly& a, const Poly& b);

  Poly pow(unsigned e) const;

  /// Quotient if `divisor` divides this polynomial exactly.
  std::optional<Poly> divide_exact(const Poly& divisor) const;
  /// Quotient; throws DegenerateInput if the division leaves a remainder.
  Poly exact_quotient(const Poly& divisor) const;

  /// Coefficients with respect to `var`, indexed by degree. Each entry lives
  /// in this ring and does not involve `var`.
  std::vector<Poly> coefficients_in(std::size_t var) const;
  static Poly from_coefficients(const RingPtr& ring, std::size_t var,
                                std::span<const Poly> coeffs);
  Poly derivative(std::size_t var) const;
  /// Multiplies by x^shift (component-wise non-negative shift).
  Poly shifted(std::span<const Exp> shift) const;
  /// Divides by the monomial x^shift; every term must be divisible.
  Poly unshifted(std::span<const Exp> shift) const;
  /// Component-wise minimum exponent over all terms.
  std::vector<Exp> min_exponents() const;

  /// Simultaneous substitution of polynomials for variables.
  Poly substitute(const std::map<std::string, Poly>& bindings) const;
  /// Substitutes rational constants for variables.
  Poly evaluate(const std::map<std::string, BigRat>& point) const;

  /// Rational content (positive), so that this / content is primitive over Z.
  BigRat content() const;
  /// Integer-coefficient primitive associate with positive leading coefficient.
  Poly primitive() const;
  Poly monic() const;

  std::string to_string() const;

  class Builder;

 private:
  std::size_t stride() const noexcept { return ring_->size() + 1; }
  const Exp* row(std::size_t term) const { return exps_.data() + term * stride(); }
  void push_row(const Exp* row, BigRat c);

  RingPtr ring_;
  std::vector<Exp> exps_;
  std::vector<BigRat> coeffs_;

  friend class Builder;
  friend struct detail::PolyAccess;
};

/// Collects unsorted terms; `finish()` sorts and combines them.
class Poly::Builder {
 public:
  explicit Builder(RingPtr ring);
  void add(std::span<const Exp> exps, const BigRat& c);
  void add_poly(const Poly& p);
  void add_product(const Poly& p, std::span<const Exp> shift, const BigRat& scale);
  Poly finish();

 private:
  RingPtr ring_;
  std::vector<Exp> exps_;
  std::vector<BigRat> coeffs_;
};

std::string to_string(const BigRat& q);

/// Largest square dividing |n|: n = s^2 * r with r square-free up to the
/// trial-division bound (residual factors above the bound stay in r).
std::pair<BigInt, BigInt> split_square(const BigInt& n);

}  // namespace dofib
