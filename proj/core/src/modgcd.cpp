#include "modgcd.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace dofib::detail {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Exp = Poly::Exp;

// ------------------------------------------------------------ arithmetic mod p

u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addm(u64 a, u64 b, u64 p) { return a >= p - b ? a - (p - b) : a + b; }
u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

u64 powm(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (; e; e >>= 1, a = mulm(a, a, p)) {
    if (e & 1) r = mulm(r, a, p);
  }
  return r;
}

u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  for (; d % 2 == 0; d /= 2) ++s;
  // These bases are deterministic for all 64-bit n.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powm(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulm(x, x, n);
      composite = x != n - 1;
    }
    if (composite) return false;
  }
  return true;
}

u64 prime_below(u64 n) {
  for (u64 c = n % 2 == 0 ? n - 1 : n - 2;; c -= 2) {
    if (is_prime(c)) return c;
  }
}

u64 reduce(const BigInt& v, u64 p) {
  return static_cast<u64>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)));
}

// ------------------------------------------------------- univariate, dense

using Dense = std::vector<u64>;  // index = degree, no trailing zeros

void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 eval(const Dense& a, u64 x, u64 p) {
  u64 r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = addm(mulm(r, x, p), *it, p);
  return r;
}

Dense mul(const Dense& a, const Dense& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Dense r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addm(r[i + j], mulm(a[i], b[j], p), p);
  }
  return r;
}

// Quotient and remainder; b nonzero.
std::pair<Dense, Dense> divmod(Dense a, const Dense& b, u64 p) {
  if (a.size() < b.size()) return {{}, std::move(a)};
  Dense q(a.size() - b.size() + 1, 0);
  const u64 inv = invm(b.back(), p);
  for (std::size_t k = q.size(); k-- > 0;) {
    const u64 c = mulm(a[k + b.size() - 1], inv, p);
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = subm(a[k + j], mulm(c, b[j], p), p);
  }
  trim(a);
  return {std::move(q), std::move(a)};
}

Dense make_monic(Dense a, u64 p) {
  if (a.empty() || a.back() == 1) return a;
  const u64 inv = invm(a.back(), p);
  for (auto& c : a) c = mulm(c, inv, p);
  return a;
}

Dense gcd(Dense a, Dense b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = divmod(std::move(a), b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

bool is_one(const Dense& a) { return a.size() == 1 && a[0] == 1; }

// ------------------------------------------------- multivariate, sparse mod p

// Terms sorted lexicographically descending; the last variable is the one
// eliminated by evaluation, so terms sharing all other exponents are contiguous.
struct MP {
  std::size_t nv = 0;
  std::vector<Exp> e;
  std::vector<u64> c;

  std::size_t size() const { return c.size(); }
  const Exp* exps(std::size_t t) const { return e.data() + t * nv; }
  bool is_constant() const {
    return size() == 1 && std::all_of(exps(0), exps(0) + nv, [](Exp x) { return x == 0; });
  }
};

int lex_cmp(const Exp* x, const Exp* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
  }
  return 0;
}

// Calls f(begin, end) for each run of terms sharing the first nv-1 exponents.
template <class F>
void for_groups(const MP& a, F&& f) {
  for (std::size_t k = 0; k < a.size();) {
    std::size_t m = k + 1;
    while (m < a.size() && lex_cmp(a.exps(m), a.exps(k), a.nv - 1) == 0) ++m;
    f(k, m);
    k = m;
  }
}

Dense group_dense(const MP& a, std::size_t b, std::size_t e) {
  Dense d(a.exps(b)[a.nv - 1] + 1, 0);
  for (std::size_t t = b; t < e; ++t) d[a.exps(t)[a.nv - 1]] = a.c[t];
  return d;
}

// Replaces each group's univariate part by f(part).
template <class F>
MP map_groups(const MP& a, F&& f) {
  MP out;
  out.nv = a.nv;
  for_groups(a, [&](std::size_t b, std::size_t e) {
    const Dense d = f(group_dense(a, b, e));
    for (std::size_t j = d.size(); j-- > 0;) {
      if (d[j] == 0) continue;
      out.e.insert(out.e.end(), a.exps(b), a.exps(b) + a.nv - 1);
      out.e.push_back(static_cast<Exp>(j));
      out.c.push_back(d[j]);
    }
  });
  return out;
}

MP eval_last(const MP& a, u64 x, u64 p) {
  MP out;
  out.nv = a.nv - 1;
  std::vector<u64> powers{1};
  for_groups(a, [&](std::size_t b, std::size_t e) {
    u64 s = 0;
    for (std::size_t t = b; t < e; ++t) {
      const Exp k = a.exps(t)[a.nv - 1];
      while (powers.size() <= k) powers.push_back(mulm(powers.back(), x, p));
      s = addm(s, mulm(a.c[t], powers[k], p), p);
    }
    if (s == 0) return;
    out.e.insert(out.e.end(), a.exps(b), a.exps(b) + out.nv);
    out.c.push_back(s);
  });
  return out;
}

Dense content_last(const MP& a, u64 p) {
  Dense g;
  for_groups(a, [&](std::size_t b, std::size_t e) {
    if (!is_one(g)) g = gcd(std::move(g), group_dense(a, b, e), p);
  });
  return g;
}

Dense lc_last(const MP& a) {
  Dense d;
  for_groups(a, [&](std::size_t b, std::size_t e) {
    if (d.empty()) d = group_dense(a, b, e);
  });
  return d;
}

MP scaled(MP a, u64 s, u64 p) {
  for (auto& c : a.c) c = mulm(c, s, p);
  return a;
}

MP monic(MP a, u64 p) {
  if (a.c.empty() || a.c[0] == 1) return a;
  const u64 inv = invm(a.c[0], p);
  return scaled(std::move(a), inv, p);
}

MP from_dense_last(const Dense& d, std::size_t nv) {
  MP out;
  out.nv = nv;
  for (std::size_t j = d.size(); j-- > 0;) {
    if (d[j] == 0) continue;
    out.e.insert(out.e.end(), nv, 0);
    out.e.back() = static_cast<Exp>(j);
    out.c.push_back(d[j]);
  }
  return out;
}

// ci (nv-1 variables) times the univariate q in the last variable.
MP lift_times(const MP& ci, const Dense& q, u64 p) {
  MP out;
  out.nv = ci.nv + 1;
  for (std::size_t t = 0; t < ci.size(); ++t) {
    for (std::size_t j = q.size(); j-- > 0;) {
      if (q[j] == 0) continue;
      out.e.insert(out.e.end(), ci.exps(t), ci.exps(t) + ci.nv);
      out.e.push_back(static_cast<Exp>(j));
      out.c.push_back(mulm(ci.c[t], q[j], p));
    }
  }
  return out;
}

// a - b for canonical operands over the same variables.
MP difference(const MP& a, const MP& b, u64 p) {
  MP out;
  out.nv = a.nv;
  std::size_t i = 0, j = 0;
  auto push = [&](const Exp* e, u64 c) {
    if (c == 0) return;
    out.e.insert(out.e.end(), e, e + a.nv);
    out.c.push_back(c);
  };
  while (i < a.size() || j < b.size()) {
    const int cmp = i == a.size() ? -1 : j == b.size() ? 1 : lex_cmp(a.exps(i), b.exps(j), a.nv);
    if (cmp > 0) {
      push(a.exps(i), a.c[i]);
      ++i;
    } else if (cmp < 0) {
      push(b.exps(j), subm(0, b.c[j], p));
      ++j;
    } else {
      push(a.exps(i), subm(a.c[i], b.c[j], p));
      ++i;
      ++j;
    }
  }
  return out;
}

MP sum(const MP& a, const MP& b, u64 p) { return difference(a, scaled(b, p - 1, p), p); }

// Compares the leading monomials in all but the last variable.
int lead_cmp(const MP& ci, const MP& h) { return lex_cmp(ci.exps(0), h.exps(0), ci.nv); }

constexpr int kMaxBadPoints = 64;

// Monic gcd in Z_p[x_1..x_nv]; nullopt after too many unlucky points.
std::optional<MP> pgcd(const MP& a, const MP& b, u64 p, std::mt19937_64& rng) {
  if (a.nv == 1) {
    Dense g = gcd(group_dense(a, 0, a.size()), group_dense(b, 0, b.size()), p);
    return from_dense_last(g, 1);
  }
  const Dense ca = content_last(a, p), cb = content_last(b, p);
  const Dense cg = gcd(ca, cb, p);
  const MP A = is_one(ca) ? a : map_groups(a, [&](const Dense& d) { return divmod(d, ca, p).first; });
  const MP B = is_one(cb) ? b : map_groups(b, [&](const Dense& d) { return divmod(d, cb, p).first; });
  const Dense la = lc_last(A), lb = lc_last(B);
  const Dense g = gcd(la, lb, p);

  MP H;
  Dense q{1};
  int bad = 0;
  while (bad < kMaxBadPoints) {
    const u64 x = rng() % p;
    if (eval(la, x, p) == 0 || eval(lb, x, p) == 0) {
      ++bad;
      continue;
    }
    std::optional<MP> ci = pgcd(eval_last(A, x, p), eval_last(B, x, p), p, rng);
    if (!ci) return std::nullopt;
    if (ci->is_constant()) return monic(from_dense_last(cg, a.nv), p);
    *ci = scaled(std::move(*ci), eval(g, x, p), p);
    const int cmp = H.size() == 0 ? -1 : lead_cmp(*ci, H);
    if (cmp < 0) {
      // First point, or every earlier point was unlucky.
      H = lift_times(*ci, Dense{1}, p);
      q = Dense{p - x, 1};
      continue;
    }
    if (cmp > 0) {
      ++bad;
      continue;
    }
    MP diff = difference(*ci, eval_last(H, x, p), p);
    if (diff.size() == 0) {
      // Stable under a fresh point: strip the content the scaling by g added.
      const Dense ch = content_last(H, p);
      MP G = map_groups(H, [&](const Dense& d) { return mul(divmod(d, ch, p).first, cg, p); });
      return monic(std::move(G), p);
    }
    const u64 inv_q = invm(eval(q, x, p), p);
    H = sum(H, lift_times(scaled(std::move(diff), inv_q, p), q, p), p);
    q = mul(q, Dense{p - x, 1}, p);
  }
  return std::nullopt;
}

// Integer polynomial restricted to `vars`, sorted like MP.
struct ZTerms {
  std::size_t nv = 0;
  std::vector<Exp> e;
  std::vector<BigInt> c;
};

ZTerms to_terms(const Poly& a, std::span<const std::size_t> vars) {
  ZTerms z;
  z.nv = vars.size();
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Exp> flat(a.size() * z.nv);
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t k = 0; k < z.nv; ++k) flat[t * z.nv + k] = a.exps(t)[vars[k]];
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return lex_cmp(flat.data() + i * z.nv, flat.data() + j * z.nv, z.nv) > 0;
  });
  for (std::size_t t : idx) {
    z.e.insert(z.e.end(), flat.begin() + static_cast<std::ptrdiff_t>(t * z.nv),
               flat.begin() + static_cast<std::ptrdiff_t>((t + 1) * z.nv));
    z.c.push_back(a.coeff(t).get_num());
  }
  return z;
}

MP image(const ZTerms& z, u64 p) {
  MP out;
  out.nv = z.nv;
  for (std::size_t t = 0; t < z.c.size(); ++t) {
    const u64 c = reduce(z.c[t], p);
    if (c == 0) continue;
    out.e.insert(out.e.end(), z.e.begin() + static_cast<std::ptrdiff_t>(t * z.nv),
                 z.e.begin() + static_cast<std::ptrdiff_t>((t + 1) * z.nv));
    out.c.push_back(c);
  }
  return out;
}

constexpr int kMaxPrimes = 48;

}  // namespace

std::optional<Poly> modular_gcd(const Poly& a, const Poly& b, std::span<const std::size_t> support) {
  // The first variable is handled by univariate Euclid and never interpolated,
  // so the one with the highest degree goes there.
  std::vector<std::size_t> vars(support.begin(), support.end());
  std::stable_sort(vars.begin(), vars.end(), [&](std::size_t v, std::size_t w) {
    return std::min(a.degree(v), b.degree(v)) > std::min(a.degree(w), b.degree(w));
  });
  auto certified = [&](const auto& H) -> std::optional<Poly> {
    Poly::Builder builder(a.ring());
    std::vector<Exp> full(a.nvars(), 0);
    for (const auto& [k, v] : H) {
      for (std::size_t i = 0; i < vars.size(); ++i) full[vars[i]] = k[i];
      builder.add(full, BigRat(v));
    }
    Poly cand = builder.finish().primitive();
    if (a.divide_exact(cand) && b.divide_exact(cand)) return cand;
    return std::nullopt;
  };

  const ZTerms za = to_terms(a, vars), zb = to_terms(b, vars);
  const BigInt lca = za.c.front(), lcb = zb.c.front();
  BigInt gamma;
  mpz_gcd(gamma.get_mpz_t(), lca.get_mpz_t(), lcb.get_mpz_t());

  std::mt19937_64 rng(0x5eed);
  std::map<std::vector<Exp>, BigInt, std::greater<>> H;  // symmetric residues modulo M
  BigInt M = 0;
  u64 p = u64{1} << 62;
  for (int used = 0; used < kMaxPrimes; ++used) {
    p = prime_below(p);
    if (reduce(lca, p) == 0 || reduce(lcb, p) == 0) continue;
    std::optional<MP> g = pgcd(image(za, p), image(zb, p), p, rng);
    if (!g) continue;
    if (g->is_constant()) return Poly(a.ring(), BigRat(1));
    *g = scaled(std::move(*g), reduce(gamma, p), p);
    const std::vector<Exp> lead(g->exps(0), g->exps(0) + g->nv);
    const int cmp = M == 0 ? -1 : lex_cmp(lead.data(), H.begin()->first.data(), g->nv);
    if (cmp > 0) continue;  // unlucky prime
    if (cmp < 0) {
      H.clear();
      for (std::size_t t = 0; t < g->size(); ++t) {
        BigInt v = g->c[t];
        if (2 * v > p) v -= p;
        H.emplace(std::vector<Exp>(g->exps(t), g->exps(t) + g->nv), std::move(v));
      }
      M = p;
      // Residues far below p are very likely the true coefficients already.
      const bool small = std::all_of(H.begin(), H.end(), [](const auto& kv) {
        return mpz_sizeinbase(kv.second.get_mpz_t(), 2) < 31;
      });
      if (small) {
        if (auto c = certified(H)) return c;
      }
      continue;
    }
    // Chinese remaindering, term by term.
    std::map<std::vector<Exp>, u64, std::greater<>> img;
    for (std::size_t t = 0; t < g->size(); ++t) img.emplace(std::vector<Exp>(g->exps(t), g->exps(t) + g->nv), g->c[t]);
    for (const auto& [k, _] : img) H.try_emplace(k, 0);
    const u64 minv = invm(reduce(M, p), p);
    const BigInt Mp = M * p;
    bool changed = false;
    for (auto& [k, h] : H) {
      auto it = img.find(k);
      const u64 gv = it == img.end() ? 0 : it->second;
      const u64 t = mulm(subm(gv, reduce(h, p), p), minv, p);
      if (t == 0) continue;
      changed = true;
      h += M * t;
      if (2 * h > Mp) h -= Mp;
      if (2 * h <= -Mp) h += Mp;
    }
    std::erase_if(H, [](const auto& kv) { return kv.second == 0; });
    M = Mp;
    if (changed) continue;
    if (auto c = certified(H)) return c;
  }
  return std::nullopt;
}

}  // namespace dofib::detail
