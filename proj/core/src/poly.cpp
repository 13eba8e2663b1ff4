#include "dofib/poly.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "dofib/errors.hpp"

namespace dofib {

namespace detail {

struct PolyAccess {
  static Poly from_sorted(RingPtr ring, std::vector<Poly::Exp> exps, std::vector<BigRat> cs) {
    Poly p(std::move(ring));
    p.exps_ = std::move(exps);
    p.coeffs_ = std::move(cs);
    return p;
  }
  static const Poly::Exp* row(const Poly& p, std::size_t t) { return p.row(t); }
};

}  // namespace detail

namespace {

using Exp = Poly::Exp;
using detail::PolyAccess;

// Descending graded-lex: positive if row a sorts before row b.
inline int compare_rows(const Exp* a, const Exp* b, std::size_t stride) {
  for (std::size_t k = 0; k < stride; ++k) {
    if (a[k] != b[k]) return a[k] > b[k] ? 1 : -1;
  }
  return 0;
}

inline Exp checked_add(Exp a, Exp b) {
  if (a > std::numeric_limits<Exp>::max() - b) {
    throw ExponentOverflow("monomial exponent exceeds 32 bits");
  }
  return a + b;
}

inline void add_rows(const Exp* a, const Exp* b, Exp* out, std::size_t stride) {
  for (std::size_t k = 0; k < stride; ++k) out[k] = checked_add(a[k], b[k]);
}

inline bool row_divides(const Exp* divisor, const Exp* m, std::size_t stride) {
  for (std::size_t k = 0; k < stride; ++k) {
    if (divisor[k] > m[k]) return false;
  }
  return true;
}

Poly merge_add(const Poly& a, const Poly& b, bool subtract) {
  const std::size_t stride = a.nvars() + 1;
  std::vector<Exp> rows;
  std::vector<BigRat> cs;
  rows.reserve((a.size() + b.size()) * stride);
  cs.reserve(a.size() + b.size());
  auto push = [&](const Exp* r, BigRat c) {
    rows.insert(rows.end(), r, r + stride);
    cs.push_back(std::move(c));
  };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int cmp;
    if (i == a.size()) {
      cmp = -1;
    } else if (j == b.size()) {
      cmp = 1;
    } else {
      cmp = compare_rows(PolyAccess::row(a, i), PolyAccess::row(b, j), stride);
    }
    if (cmp > 0) {
      push(PolyAccess::row(a, i), a.coeff(i));
      ++i;
    } else if (cmp < 0) {
      push(PolyAccess::row(b, j), subtract ? BigRat(-b.coeff(j)) : b.coeff(j));
      ++j;
    } else {
      BigRat c = subtract ? BigRat(a.coeff(i) - b.coeff(j)) : BigRat(a.coeff(i) + b.coeff(j));
      if (c != 0) push(PolyAccess::row(a, i), std::move(c));
      ++i;
      ++j;
    }
  }
  return PolyAccess::from_sorted(a.ring(), std::move(rows), std::move(cs));
}

// Johnson's heap multiplication: a k-way merge of the rows a_i * b, each of
// which is already sorted because graded-lex is a monomial order.
Poly heap_multiply(const Poly& a, const Poly& b) {
  const std::size_t stride = a.nvars() + 1;
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> next(n, 0);
  std::vector<Exp> prod(n * stride);
  auto compute = [&](std::size_t i) {
    add_rows(PolyAccess::row(a, i), PolyAccess::row(b, next[i]), prod.data() + i * stride, stride);
  };
  auto less = [&](std::size_t x, std::size_t y) {
    return compare_rows(prod.data() + x * stride, prod.data() + y * stride, stride) < 0;
  };
  std::vector<std::size_t> heap;
  heap.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    compute(i);
    heap.push_back(i);
  }
  std::make_heap(heap.begin(), heap.end(), less);

  std::vector<Exp> rows;
  std::vector<BigRat> cs;
  std::vector<Exp> current(stride);
  BigRat acc;
  bool have = false;
  BigRat term;
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), less);
    const std::size_t i = heap.back();
    heap.pop_back();
    const Exp* r = prod.data() + i * stride;
    if (have && compare_rows(r, current.data(), stride) == 0) {
      term = a.coeff(i);
      term *= b.coeff(next[i]);
      acc += term;
    } else {
      if (have && acc != 0) {
        rows.insert(rows.end(), current.begin(), current.end());
        cs.push_back(acc);
      }
      std::copy(r, r + stride, current.begin());
      acc = a.coeff(i);
      acc *= b.coeff(next[i]);
      have = true;
    }
    if (++next[i] < m) {
      compute(i);
      heap.push_back(i);
      std::push_heap(heap.begin(), heap.end(), less);
    }
  }
  if (have && acc != 0) {
    rows.insert(rows.end(), current.begin(), current.end());
    cs.push_back(acc);
  }
  return PolyAccess::from_sorted(a.ring(), std::move(rows), std::move(cs));
}

Poly scale_shift(const Poly& p, const Exp* mono_row, const BigRat& c) {
  const std::size_t stride = p.nvars() + 1;
  std::vector<Exp> rows(p.size() * stride);
  std::vector<BigRat> cs(p.size());
  for (std::size_t t = 0; t < p.size(); ++t) {
    add_rows(PolyAccess::row(p, t), mono_row, rows.data() + t * stride, stride);
    cs[t] = p.coeff(t) * c;
  }
  return PolyAccess::from_sorted(p.ring(), std::move(rows), std::move(cs));
}

// Heap-based exact division (Johnson / Monagan-Pearce). Returns nullopt as
// soon as a term appears that the divisor's leading monomial cannot absorb.
std::optional<Poly> heap_divide(const Poly& a, const Poly& b) {
  const std::size_t stride = a.nvars() + 1;
  const Exp* lead = PolyAccess::row(b, 0);
  const BigRat& lc = b.coeff(0);
  const std::size_t m = b.size();

  std::vector<Exp> qrows;
  std::vector<BigRat> qcs;
  std::vector<std::size_t> next;
  std::vector<Exp> prod;
  std::vector<std::size_t> heap;
  auto prow = [&](std::size_t k) { return prod.data() + k * stride; };
  auto compute = [&](std::size_t k) {
    add_rows(qrows.data() + k * stride, PolyAccess::row(b, next[k]), prow(k), stride);
  };
  auto less = [&](std::size_t x, std::size_t y) {
    return compare_rows(prow(x), prow(y), stride) < 0;
  };

  std::size_t ai = 0;
  std::vector<Exp> mono(stride);
  BigRat c, term;
  while (ai < a.size() || !heap.empty()) {
    // Largest pending monomial.
    bool from_a = false;
    if (heap.empty()) {
      from_a = true;
    } else if (ai < a.size()) {
      from_a = compare_rows(PolyAccess::row(a, ai), prow(heap.front()), stride) >= 0;
    }
    if (from_a) {
      std::copy(PolyAccess::row(a, ai), PolyAccess::row(a, ai) + stride, mono.begin());
    } else {
      std::copy(prow(heap.front()), prow(heap.front()) + stride, mono.begin());
    }
    c = 0;
    if (ai < a.size() && compare_rows(PolyAccess::row(a, ai), mono.data(), stride) == 0) {
      c = a.coeff(ai);
      ++ai;
    }
    while (!heap.empty() && compare_rows(prow(heap.front()), mono.data(), stride) == 0) {
      std::pop_heap(heap.begin(), heap.end(), less);
      const std::size_t k = heap.back();
      heap.pop_back();
      term = qcs[k];
      term *= b.coeff(next[k]);
      c -= term;
      if (++next[k] < m) {
        compute(k);
        heap.push_back(k);
        std::push_heap(heap.begin(), heap.end(), less);
      }
    }
    if (c == 0) continue;
    if (!row_divides(lead, mono.data(), stride)) return std::nullopt;
    const std::size_t k = qcs.size();
    for (std::size_t s = 0; s < stride; ++s) qrows.push_back(mono[s] - lead[s]);
    qcs.push_back(c / lc);
    next.push_back(1);
    prod.resize(prod.size() + stride);
    if (m > 1) {
      compute(k);
      heap.push_back(k);
      std::push_heap(heap.begin(), heap.end(), less);
    }
  }
  return PolyAccess::from_sorted(a.ring(), std::move(qrows), std::move(qcs));
}

}  // namespace

// ---------------------------------------------------------------- Ring

Ring::Ring(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) throw ParseError("duplicate variable '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

RingPtr make_ring(std::vector<std::string> names) {
  return std::make_shared<const Ring>(std::move(names));
}

bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || *a == *b; }

RingPtr unite(const RingPtr& a, const RingPtr& b) {
  if (same_ring(a, b)) return a;
  std::vector<std::string> names = a->names();
  for (const auto& n : b->names()) {
    if (!a->index_of(n)) names.push_back(n);
  }
  if (names.size() == a->size()) return a;
  if (names == b->names()) return b;
  return make_ring(std::move(names));
}

// ---------------------------------------------------------------- Poly

Poly::Poly() : ring_(make_ring({})) {}

Poly::Poly(RingPtr ring) : ring_(std::move(ring)) {}

Poly::Poly(RingPtr ring, const BigRat& constant) : ring_(std::move(ring)) {
  if (constant != 0) {
    exps_.assign(stride(), 0);
    coeffs_.push_back(constant);
  }
}

Poly Poly::variable(const RingPtr& ring, std::string_view name) {
  auto idx = ring->index_of(name);
  if (!idx) throw ParseError("unknown variable '" + std::string(name) + "'");
  return variable(ring, *idx);
}

Poly Poly::variable(const RingPtr& ring, std::size_t index) {
  std::vector<Exp> e(ring->size(), 0);
  e.at(index) = 1;
  return monomial(ring, e, BigRat(1));
}

Poly Poly::monomial(const RingPtr& ring, std::span<const Exp> exps, const BigRat& c) {
  Poly p(ring);
  if (c == 0) return p;
  std::vector<Exp> row(ring->size() + 1, 0);
  for (std::size_t i = 0; i < ring->size(); ++i) {
    row[i + 1] = exps[i];
    row[0] = checked_add(row[0], exps[i]);
  }
  p.push_row(row.data(), c);
  return p;
}

void Poly::push_row(const Exp* r, BigRat c) {
  exps_.insert(exps_.end(), r, r + stride());
  coeffs_.push_back(std::move(c));
}

bool Poly::is_constant() const noexcept {
  return coeffs_.empty() || (coeffs_.size() == 1 && exps_[0] == 0);
}

bool Poly::is_one() const { return is_constant() && !is_zero() && coeffs_[0] == 1; }

BigRat Poly::constant_value() const {
  if (!is_constant()) throw DegenerateInput("polynomial is not constant: " + to_string());
  return is_zero() ? BigRat(0) : coeffs_[0];
}

const BigRat& Poly::leading_coeff() const {
  if (is_zero()) throw DegenerateInput("leading coefficient of zero polynomial");
  return coeffs_[0];
}

std::uint32_t Poly::total_degree() const { return is_zero() ? 0 : exps_[0]; }

std::uint32_t Poly::degree(std::size_t var) const {
  Exp d = 0;
  const std::size_t s = stride();
  for (std::size_t t = 0; t < size(); ++t) d = std::max(d, exps_[t * s + 1 + var]);
  return d;
}

std::uint32_t Poly::min_degree(std::size_t var) const {
  if (is_zero()) return 0;
  Exp d = std::numeric_limits<Exp>::max();
  const std::size_t s = stride();
  for (std::size_t t = 0; t < size(); ++t) d = std::min(d, exps_[t * s + 1 + var]);
  return d;
}

std::vector<std::size_t> Poly::support() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < nvars(); ++v) {
    if (degree(v) > 0) out.push_back(v);
  }
  return out;
}

bool Poly::involves(std::string_view name) const {
  auto idx = ring_->index_of(name);
  return idx && involves(*idx);
}

bool Poly::is_homogeneous() const {
  for (std::size_t t = 1; t < size(); ++t) {
    if (exps_[t * stride()] != exps_[0]) return false;
  }
  return true;
}

std::optional<std::uint32_t> Poly::homogeneous_degree(std::span<const std::size_t> vars) const {
  std::optional<std::uint32_t> deg;
  for (std::size_t t = 0; t < size(); ++t) {
    std::uint32_t d = 0;
    for (auto v : vars) d += exps(t)[v];
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg.value_or(0);
}

Poly Poly::in_ring(const RingPtr& target) const {
  if (ring_ == target) return *this;
  if (*ring_ == *target) {
    Poly r = *this;
    r.ring_ = target;
    return r;
  }
  std::vector<std::optional<std::size_t>> map(nvars());
  for (std::size_t v = 0; v < nvars(); ++v) {
    map[v] = target->index_of(ring_->name(v));
    if (!map[v] && degree(v) > 0) {
      throw DegenerateInput("variable '" + ring_->name(v) + "' missing from target ring");
    }
  }
  Builder b(target);
  std::vector<Exp> e(target->size());
  for (std::size_t t = 0; t < size(); ++t) {
    std::fill(e.begin(), e.end(), 0);
    auto src = exps(t);
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (map[v]) e[*map[v]] = src[v];
    }
    b.add(e, coeffs_[t]);
  }
  return b.finish();
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& rhs) {
  if (!same_ring(ring_, rhs.ring_)) {
    RingPtr target = unite(ring_, rhs.ring_);
    *this = in_ring(target);
    return *this += rhs.in_ring(target);
  }
  if (rhs.is_zero()) return *this;
  *this = merge_add(*this, rhs, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  if (!same_ring(ring_, rhs.ring_)) {
    RingPtr target = unite(ring_, rhs.ring_);
    *this = in_ring(target);
    return *this -= rhs.in_ring(target);
  }
  if (rhs.is_zero()) return *this;
  *this = merge_add(*this, rhs, true);
  return *this;
}

Poly& Poly::operator*=(const BigRat& c) {
  if (c == 0) {
    exps_.clear();
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Poly& Poly::operator*=(const Poly& rhs) {
  *this = *this * rhs;
  return *this;
}

Poly operator*(const Poly& lhs, const Poly& rhs) {
  if (!same_ring(lhs.ring_, rhs.ring_)) {
    RingPtr target = unite(lhs.ring_, rhs.ring_);
    return lhs.in_ring(target) * rhs.in_ring(target);
  }
  if (lhs.is_zero() || rhs.is_zero()) return Poly(lhs.ring_);
  if (lhs.size() == 1) return scale_shift(rhs, lhs.row(0), lhs.coeffs_[0]);
  if (rhs.size() == 1) return scale_shift(lhs, rhs.row(0), rhs.coeffs_[0]);
  return lhs.size() <= rhs.size() ? heap_multiply(lhs, rhs) : heap_multiply(rhs, lhs);
}

bool operator==(const Poly& a, const Poly& b) {
  if (!same_ring(a.ring_, b.ring_)) {
    RingPtr target = unite(a.ring_, b.ring_);
    return a.in_ring(target) == b.in_ring(target);
  }
  return a.coeffs_ == b.coeffs_ && a.exps_ == b.exps_;
}

Poly Poly::pow(unsigned e) const {
  Poly result(ring_, BigRat(1));
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
  if (!same_ring(ring_, divisor.ring_)) {
    RingPtr target = unite(ring_, divisor.ring_);
    return in_ring(target).divide_exact(divisor.in_ring(target));
  }
  if (divisor.is_zero()) throw DivisionByZero("division by the zero polynomial");
  if (is_zero()) return Poly(ring_);
  if (divisor.size() == 1) {
    const Exp* lead = divisor.row(0);
    for (std::size_t t = 0; t < size(); ++t) {
      if (!row_divides(lead, row(t), stride())) return std::nullopt;
    }
    std::vector<Exp> rows(exps_.size());
    std::vector<BigRat> cs(size());
    for (std::size_t t = 0; t < size(); ++t) {
      for (std::size_t s = 0; s < stride(); ++s) rows[t * stride() + s] = row(t)[s] - lead[s];
      cs[t] = coeffs_[t] / divisor.coeffs_[0];
    }
    return PolyAccess::from_sorted(ring_, std::move(rows), std::move(cs));
  }
  if (total_degree() < divisor.total_degree()) return std::nullopt;
  return heap_divide(*this, divisor);
}

Poly Poly::exact_quotient(const Poly& divisor) const {
  auto q = divide_exact(divisor);
  if (!q) throw DegenerateInput("inexact division of " + to_string() + " by " + divisor.to_string());
  return std::move(*q);
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
  const Exp d = degree(var);
  std::vector<Builder> parts;
  parts.reserve(d + 1);
  for (Exp k = 0; k <= d; ++k) parts.emplace_back(ring_);
  std::vector<Exp> e(nvars());
  for (std::size_t t = 0; t < size(); ++t) {
    auto src = exps(t);
    std::copy(src.begin(), src.end(), e.begin());
    const Exp k = e[var];
    e[var] = 0;
    parts[k].add(e, coeffs_[t]);
  }
  std::vector<Poly> out;
  out.reserve(d + 1);
  for (auto& b : parts) out.push_back(b.finish());
  return out;
}

Poly Poly::from_coefficients(const RingPtr& ring, std::size_t var, std::span<const Poly> coeffs) {
  Builder b(ring);
  std::vector<Exp> shift(ring->size(), 0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    shift[var] = static_cast<Exp>(k);
    b.add_product(coeffs[k].in_ring(ring), shift, BigRat(1));
  }
  return b.finish();
}

Poly Poly::derivative(std::size_t var) const {
  Builder b(ring_);
  std::vector<Exp> e(nvars());
  for (std::size_t t = 0; t < size(); ++t) {
    auto src = exps(t);
    if (src[var] == 0) continue;
    std::copy(src.begin(), src.end(), e.begin());
    BigRat c = coeffs_[t] * BigRat(src[var]);
    e[var] -= 1;
    b.add(e, c);
  }
  return b.finish();
}

Poly Poly::shifted(std::span<const Exp> shift) const {
  std::vector<Exp> row(stride(), 0);
  for (std::size_t v = 0; v < nvars(); ++v) {
    row[v + 1] = shift[v];
    row[0] = checked_add(row[0], shift[v]);
  }
  return scale_shift(*this, row.data(), BigRat(1));
}

Poly Poly::unshifted(std::span<const Exp> shift) const {
  Exp total = 0;
  for (auto s : shift) total += s;
  std::vector<Exp> rows(exps_.size());
  for (std::size_t t = 0; t < size(); ++t) {
    const Exp* r = row(t);
    Exp* o = rows.data() + t * stride();
    o[0] = r[0] - total;
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (r[v + 1] < shift[v]) throw DegenerateInput("monomial does not divide polynomial");
      o[v + 1] = r[v + 1] - shift[v];
    }
  }
  return PolyAccess::from_sorted(ring_, std::move(rows), coeffs_);
}

std::vector<Exp> Poly::min_exponents() const {
  std::vector<Exp> m(nvars(), 0);
  for (std::size_t v = 0; v < nvars(); ++v) m[v] = min_degree(v);
  return m;
}

Poly Poly::substitute(const std::map<std::string, Poly>& bindings) const {
  RingPtr target = ring_;
  std::vector<const Poly*> image(nvars(), nullptr);
  for (const auto& [name, value] : bindings) {
    auto idx = ring_->index_of(name);
    if (!idx) throw DegenerateInput("substitution binds unknown variable '" + name + "'");
    image[*idx] = &value;
    target = unite(target, value.ring());
  }
  // Cache powers of each image lazily.
  std::vector<std::vector<Poly>> powers(nvars());
  auto power = [&](std::size_t v, Exp e) -> const Poly& {
    auto& cache = powers[v];
    if (cache.empty()) {
      cache.emplace_back(target, BigRat(1));
      cache.push_back(image[v]->in_ring(target));
    }
    while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
  };
  std::vector<std::size_t> map(nvars()), bound;
  for (std::size_t v = 0; v < nvars(); ++v) {
    map[v] = *target->index_of(ring_->name(v));
    if (image[v]) bound.push_back(v);
  }
  // Group terms by the exponents of the bound variables one variable at a
  // time, so terms sharing a prefix share the products of powers.
  std::vector<std::size_t> terms(size());
  std::iota(terms.begin(), terms.end(), std::size_t{0});
  std::vector<Exp> rest(target->size(), 0);
  auto expand = [&](auto& self, std::size_t lo, std::size_t hi, std::size_t level) -> Poly {
    if (level == bound.size()) {
      Builder out(target);
      for (std::size_t k = lo; k < hi; ++k) {
        std::fill(rest.begin(), rest.end(), 0);
        auto e = exps(terms[k]);
        for (std::size_t v = 0; v < nvars(); ++v) {
          if (!image[v]) rest[map[v]] = e[v];
        }
        out.add(rest, coeffs_[terms[k]]);
      }
      return out.finish();
    }
    const std::size_t v = bound[level];
    std::stable_sort(terms.begin() + lo, terms.begin() + hi,
                     [&](std::size_t a, std::size_t b) { return exps(a)[v] < exps(b)[v]; });
    Poly sum(target);
    for (std::size_t k = lo; k < hi;) {
      const Exp e = exps(terms[k])[v];
      std::size_t end = k;
      while (end < hi && exps(terms[end])[v] == e) ++end;
      Poly part = self(self, k, end, level + 1);
      sum += e == 0 ? part : part * power(v, e);
      k = end;
    }
    return sum;
  };
  return expand(expand, 0, terms.size(), 0);
}

Poly Poly::evaluate(const std::map<std::string, BigRat>& point) const {
  std::map<std::string, Poly> b;
  for (const auto& [name, value] : point) {
    if (ring_->index_of(name)) b.emplace(name, Poly(ring_, value));
  }
  return substitute(b);
}

BigRat Poly::content() const {
  if (is_zero()) return BigRat(0);
  BigInt num_gcd = 0, den_lcm = 1;
  for (const auto& c : coeffs_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  BigRat r(num_gcd, den_lcm);
  r.canonicalize();
  return r;
}

Poly Poly::primitive() const {
  if (is_zero()) return *this;
  BigRat c = content();
  if (coeffs_[0] < 0) c = -c;
  Poly r = *this;
  for (auto& x : r.coeffs_) x /= c;
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  BigRat lc = coeffs_[0];
  for (auto& x : r.coeffs_) x /= lc;
  return r;
}

std::string to_string(const BigRat& q) { return q.get_str(); }

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t t = 0; t < size(); ++t) {
    const BigRat& c = coeffs_[t];
    const bool negative = c < 0;
    BigRat mag = negative ? BigRat(-c) : c;
    if (t == 0) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    auto e = exps(t);
    bool first_factor = true;
    if (term_degree(t) == 0 || mag != 1) {
      os << mag.get_str();
      first_factor = false;
    }
    for (std::size_t v = 0; v < nvars(); ++v) {
      if (e[v] == 0) continue;
      if (!first_factor) os << "*";
      os << ring_->name(v);
      if (e[v] > 1) os << "^" << e[v];
      first_factor = false;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- Builder

Poly::Builder::Builder(RingPtr ring) : ring_(std::move(ring)) {}

void Poly::Builder::add(std::span<const Exp> exps, const BigRat& c) {
  if (c == 0) return;
  Exp deg = 0;
  for (auto x : exps) deg = checked_add(deg, x);
  exps_.push_back(deg);
  exps_.insert(exps_.end(), exps.begin(), exps.end());
  coeffs_.push_back(c);
}

void Poly::Builder::add_poly(const Poly& p) {
  const Poly q = p.in_ring(ring_);
  exps_.insert(exps_.end(), q.exps_.begin(), q.exps_.end());
  coeffs_.insert(coeffs_.end(), q.coeffs_.begin(), q.coeffs_.end());
}

void Poly::Builder::add_product(const Poly& p, std::span<const Exp> shift, const BigRat& scale) {
  if (scale == 0) return;
  const Poly q = p.in_ring(ring_);
  const std::size_t stride = ring_->size() + 1;
  Exp total = 0;
  for (auto s : shift) total = checked_add(total, s);
  for (std::size_t t = 0; t < q.size(); ++t) {
    const Exp* r = q.row(t);
    exps_.push_back(checked_add(r[0], total));
    for (std::size_t v = 0; v + 1 < stride; ++v) exps_.push_back(checked_add(r[v + 1], shift[v]));
    coeffs_.push_back(q.coeffs_[t] * scale);
  }
}

Poly Poly::Builder::finish() {
  const std::size_t stride = ring_->size() + 1;
  const std::size_t n = coeffs_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Exp* base = exps_.data();
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return compare_rows(base + x * stride, base + y * stride, stride) > 0;
  });
  std::vector<Exp> rows;
  std::vector<BigRat> cs;
  rows.reserve(n * stride);
  cs.reserve(n);
  for (std::size_t k = 0; k < n;) {
    const Exp* r = base + order[k] * stride;
    BigRat acc = coeffs_[order[k]];
    std::size_t j = k + 1;
    while (j < n && compare_rows(base + order[j] * stride, r, stride) == 0) {
      acc += coeffs_[order[j]];
      ++j;
    }
    if (acc != 0) {
      rows.insert(rows.end(), r, r + stride);
      cs.push_back(std::move(acc));
    }
    k = j;
  }
  exps_.clear();
  coeffs_.clear();
  return PolyAccess::from_sorted(ring_, std::move(rows), std::move(cs));
}

// ---------------------------------------------------------------- integers

std::pair<BigInt, BigInt> split_square(const BigInt& n) {
  if (n == 0) return {BigInt(0), BigInt(0)};
  BigInt rest = abs(n);
  BigInt square = 1, free = 1;
  for (unsigned long p = 2; p < 100000 && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (unsigned k = 0; k + 1 < e; k += 2) square *= p;
    if (e % 2 == 1) free *= p;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      BigInt s;
      mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
      square *= s;
    } else {
      free *= rest;
    }
  }
  if (n < 0) free = -free;
  return {square, free};
}

}  // namespace dofib
