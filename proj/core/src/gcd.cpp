#include "dofib/gcd.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "dofib/errors.hpp"
#include "modgcd.hpp"

namespace dofib {

namespace {

using Exp = Poly::Exp;
using Dense = std::vector<BigRat>;  // index = degree

Poly one_like(const Poly& p) { return Poly(p.ring(), BigRat(1)); }

// Coefficient of v^deg, as a polynomial free of v.
Poly coeff_of(const Poly& p, std::size_t v, Exp deg) {
  Poly::Builder b(p.ring());
  std::vector<Exp> e(p.nvars());
  for (std::size_t t = 0; t < p.size(); ++t) {
    auto src = p.exps(t);
    if (src[v] != deg) continue;
    std::copy(src.begin(), src.end(), e.begin());
    e[v] = 0;
    b.add(e, p.coeff(t));
  }
  return b.finish();
}

Poly lead_in(const Poly& p, std::size_t v) { return coeff_of(p, v, p.degree(v)); }

Poly times_var_power(const Poly& p, std::size_t v, Exp k) {
  if (k == 0) return p;
  std::vector<Exp> s(p.nvars(), 0);
  s[v] = k;
  return p.shifted(s);
}

// Image of p in Q[v] after substituting integers for every other variable.
Dense evaluate_dense(const Poly& p, std::size_t v, const std::vector<BigInt>& point) {
  Dense out(p.degree(v) + 1, BigRat(0));
  std::vector<std::vector<BigInt>> powers(p.nvars());
  for (std::size_t t = 0; t < p.size(); ++t) {
    auto e = p.exps(t);
    BigRat c = p.coeff(t);
    for (std::size_t w = 0; w < p.nvars(); ++w) {
      if (w == v || e[w] == 0) continue;
      auto& cache = powers[w];
      if (cache.empty()) cache.push_back(BigInt(1));
      while (cache.size() <= e[w]) cache.push_back(cache.back() * point[w]);
      c *= cache[e[w]];
    }
    out[e[v]] += c;
  }
  return out;
}

void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Degree of the gcd of two dense univariate polynomials over Q.
std::size_t dense_gcd_degree(Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    if (a.size() < b.size()) std::swap(a, b);
    // a <- a mod b
    const BigRat inv = 1 / b.back();
    while (a.size() >= b.size()) {
      const BigRat q = a.back() * inv;
      const std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= q * b[k];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Deterministic per-call evaluation point with moderate integers.
std::vector<BigInt> sample_point(std::size_t n, unsigned salt) {
  std::vector<BigInt> pt(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(salt) * 0xbf58476d1ce4e5b9ULL);
  for (auto& x : pt) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x = static_cast<long>((state >> 33) % 997) + 3;
  }
  return pt;
}

// True when a cheap modular-style image proves that the primitive parts of
// a and b in v are coprime.
bool image_says_coprime(const Poly& a, const Poly& b, std::size_t v) {
  for (unsigned attempt = 0; attempt < 2; ++attempt) {
    auto pt = sample_point(a.nvars(), attempt + 7 * static_cast<unsigned>(v));
    Dense ia = evaluate_dense(a, v, pt);
    Dense ib = evaluate_dense(b, v, pt);
    if (ia.back() == 0 || ib.back() == 0) continue;  // leading coefficient vanished
    return dense_gcd_degree(std::move(ia), std::move(ib)) == 0;
  }
  return false;
}

Poly gcd_no_monomial(const Poly& a, const Poly& b);

Poly subresultant_gcd(Poly A, Poly B, std::size_t v) {
  if (A.degree(v) < B.degree(v)) std::swap(A, B);
  Poly g = one_like(A), h = one_like(A);
  while (true) {
    const Exp d = A.degree(v) - B.degree(v);
    Poly R = pseudo_remainder(A, B, v);
    if (R.is_zero()) break;
    if (R.degree(v) == 0) return one_like(A);
    A = std::move(B);
    B = R.exact_quotient(g * h.pow(d));
    g = lead_in(A, v);
    if (d > 0) h = g.pow(d).exact_quotient(h.pow(d - 1));
  }
  return B.exact_quotient(content_in(B, v)).primitive();
}

Poly gcd_no_monomial(const Poly& a, const Poly& b) {
  if (a.is_constant() || b.is_constant()) return one_like(a);
  const auto sa = a.support();
  const auto sb = b.support();
  for (auto v : sa) {
    if (!std::binary_search(sb.begin(), sb.end(), v)) return gcd(content_in(a, v), b);
  }
  for (auto v : sb) {
    if (!std::binary_search(sa.begin(), sa.end(), v)) return gcd(a, content_in(b, v));
  }
  const Poly& small = a.size() <= b.size() ? a : b;
  const Poly& large = a.size() <= b.size() ? b : a;
  if (large.divide_exact(small)) return small.primitive();
  if (auto h = detail::modular_gcd(a.primitive(), b.primitive(), sa)) return *h;

  std::size_t v = sa.front();
  for (auto w : sa) {
    if (std::max(a.degree(w), b.degree(w)) < std::max(a.degree(v), b.degree(v))) v = w;
  }
  const Poly ca = content_in(a, v);
  const Poly cb = content_in(b, v);
  const Poly pa = a.exact_quotient(ca);
  const Poly pb = b.exact_quotient(cb);
  const Poly gc = gcd(ca, cb);

  Poly gp = one_like(a);
  if (image_says_coprime(pa, pb, v)) {
    // coprime primitive parts
  } else if (pa.degree(v) == 1 || pb.degree(v) == 1) {
    const Poly& lin = pa.degree(v) == 1 ? pa : pb;
    const Poly& other = pa.degree(v) == 1 ? pb : pa;
    if (other.divide_exact(lin)) gp = lin;
  } else {
    gp = subresultant_gcd(pa, pb, v);
  }
  return (gc * gp).primitive();
}

Poly pow_product(const std::vector<Poly>& parts, unsigned start, unsigned step, const RingPtr& ring) {
  Poly out(ring, BigRat(1));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const unsigned mult = static_cast<unsigned>(i) + 1;
    if (mult < start) continue;
    const unsigned e = step == 2 ? mult / 2 : mult % 2;
    if (e > 0) out *= parts[i].pow(e);
  }
  return out;
}

// Yun's algorithm for a polynomial primitive in v (every factor involves v).
std::vector<Poly> yun(const Poly& f, std::size_t v) {
  std::vector<Poly> out;
  const Poly df = f.derivative(v);
  Poly b = gcd(f, df);
  Poly c = f.exact_quotient(b);
  Poly d = df.exact_quotient(b) - c.derivative(v);
  while (!c.is_constant()) {
    Poly a = gcd(c, d);
    c = c.exact_quotient(a);
    d = d.exact_quotient(a) - c.derivative(v);
    out.push_back(std::move(a));
  }
  return out;
}

void merge_into(std::vector<Poly>& acc, const std::vector<Poly>& parts) {
  if (acc.size() < parts.size()) acc.resize(parts.size(), Poly(parts.front().ring(), BigRat(1)));
  for (std::size_t i = 0; i < parts.size(); ++i) acc[i] *= parts[i];
}

std::vector<Poly> decompose(const Poly& p) {
  std::vector<Poly> acc;
  if (p.is_constant()) return acc;
  // Monomial factor first.
  const auto m = p.min_exponents();
  Poly rest = p.unshifted(m);
  for (std::size_t v = 0; v < p.nvars(); ++v) {
    if (m[v] == 0) continue;
    std::vector<Poly> parts(m[v], one_like(p));
    parts[m[v] - 1] = Poly::variable(p.ring(), v);
    merge_into(acc, parts);
  }
  while (!rest.is_constant()) {
    const std::size_t v = rest.support().front();
    const Poly cont = content_in(rest, v);
    const Poly prim = rest.exact_quotient(cont);
    auto parts = yun(prim, v);
    if (!parts.empty()) merge_into(acc, parts);
    rest = cont;
  }
  return acc;
}

}  // namespace

Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t v) {
  const Exp db = b.degree(v);
  if (b.is_zero()) throw DivisionByZero("pseudo-remainder by zero");
  if (a.degree(v) < db) return a;
  const Poly lcb = lead_in(b, v);
  Poly R = a;
  unsigned e = a.degree(v) - db + 1;
  while (!R.is_zero() && R.degree(v) >= db) {
    const Exp k = R.degree(v) - db;
    const Poly lr = lead_in(R, v);
    R = lcb * R - times_var_power(lr * b, v, k);
    --e;
  }
  if (e > 0) R *= lcb.pow(e);
  return R;
}

Poly content_in(const Poly& p, std::size_t var) {
  auto coeffs = p.coefficients_in(var);
  std::erase_if(coeffs, [](const Poly& c) { return c.is_zero(); });
  if (coeffs.empty()) return Poly(p.ring());
  std::sort(coeffs.begin(), coeffs.end(),
            [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g = coeffs.front().primitive();
  for (std::size_t i = 1; i < coeffs.size() && !g.is_constant(); ++i) g = gcd(g, coeffs[i]);
  if (g.is_constant()) return one_like(p);
  return g;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (!same_ring(a.ring(), b.ring())) {
    RingPtr r = unite(a.ring(), b.ring());
    return gcd(a.in_ring(r), b.in_ring(r));
  }
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return one_like(a);
  auto ma = a.min_exponents();
  auto mb = b.min_exponents();
  std::vector<Exp> m(ma.size());
  for (std::size_t v = 0; v < m.size(); ++v) m[v] = std::min(ma[v], mb[v]);
  Poly g = gcd_no_monomial(a.unshifted(ma), b.unshifted(mb));
  return g.shifted(m);
}

std::vector<Poly> squarefree_decomposition(const Poly& p) {
  if (p.is_zero()) throw DegenerateInput("square-free decomposition of zero");
  return decompose(p);
}

SquareSplit extract_square(const Poly& p) {
  if (p.is_zero()) throw DegenerateInput("square extraction of zero");
  const auto parts = decompose(p);
  Poly root = pow_product(parts, 2, 2, p.ring());
  Poly free = p.exact_quotient(root * root);
  return {std::move(root), std::move(free)};
}

Poly resultant(const Poly& a, const Poly& b, std::size_t var) {
  const Exp m = a.degree(var), n = b.degree(var);
  if (m == 0 || n == 0) throw DegenerateInput("resultant needs positive degree in the variable");
  if (!same_ring(a.ring(), b.ring())) {
    RingPtr r = unite(a.ring(), b.ring());
    return resultant(a.in_ring(r), b.in_ring(r), var);
  }
  const auto ca = a.coefficients_in(var);
  const auto cb = b.coefficients_in(var);
  const std::size_t N = m + n;
  std::vector<std::vector<Poly>> M(N, std::vector<Poly>(N, Poly(a.ring())));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k <= m; ++k) M[r][r + k] = ca[m - k];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k <= n; ++k) M[n + r][r + k] = cb[n - k];
  }
  // Bareiss fraction-free elimination.
  Poly prev(a.ring(), BigRat(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (M[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < N && M[piv][k].is_zero()) ++piv;
      if (piv == N) return Poly(a.ring());
      std::swap(M[k], M[piv]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      for (std::size_t j = k + 1; j < N; ++j) {
        M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).exact_quotient(prev);
      }
      M[i][k] = Poly(a.ring());
    }
    prev = M[k][k];
  }
  Poly det = M[N - 1][N - 1];
  return negate ? -det : det;
}

Poly discriminant(const Poly& f, std::size_t var) {
  const Exp n = f.degree(var);
  if (n < 1) throw DegenerateInput("discriminant of a constant");
  if (n == 1) return Poly(f.ring(), BigRat(1));
  Poly r = resultant(f, f.derivative(var), var).exact_quotient(lead_in(f, var));
  return (n * (n - 1) / 2) % 2 == 1 ? -r : r;
}

std::vector<Poly> coprime_base(const std::vector<Poly>& ps) {
  std::vector<Poly> base;
  auto push = [&base](const Poly& f) {
    if (!f.is_zero() && !f.is_constant()) base.push_back(f.primitive());
  };
  for (const auto& p : ps) {
    if (p.is_zero()) continue;
    for (const auto& f : squarefree_decomposition(p)) push(f);
  }
  // Split any pair with a common factor into the gcd and the cofactors until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < base.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < base.size() && !changed; ++j) {
        const Poly g = gcd(base[i], base[j]);
        if (g.is_constant()) continue;
        const Poly a = base[i].exact_quotient(g), b = base[j].exact_quotient(g);
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(j));
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
        push(g);
        push(a);
        push(b);
        changed = true;
      }
    }
  }
  std::map<std::string, Poly> sorted;
  for (auto& f : base) sorted.emplace(f.to_string(), std::move(f));
  std::vector<Poly> out;
  for (auto& [_, f] : sorted) out.push_back(std::move(f));
  return out;
}

}  // namespace dofib
