#include "dofib/ratfunc.hpp"

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"

namespace dofib {

namespace {

// Scale so the denominator is primitive with positive leading coefficient.
void normalize_scale(Poly& num, Poly& den) {
  const Poly prim = den.primitive();
  const BigRat k = den.leading_coeff() / prim.leading_coeff();
  if (k != 1) {
    num *= BigRat(1 / k);
    den = prim;
  }
}

}  // namespace

RatFunc::RatFunc() : num_(), den_(num_.ring(), BigRat(1)) {}

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(num_.ring(), BigRat(1)) {}

RatFunc::RatFunc(const RingPtr& ring, const BigRat& c) : num_(ring, c), den_(ring, BigRat(1)) {}

RatFunc::RatFunc(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (!same_ring(num.ring(), den.ring())) {
    RingPtr r = unite(num.ring(), den.ring());
    num = num.in_ring(r);
    den = den.in_ring(r);
  }
  if (num.is_zero()) {
    den_ = Poly(num.ring(), BigRat(1));
    num_ = std::move(num);
    return;
  }
  if (!den.is_constant()) {
    Poly g = gcd(num, den);
    if (!g.is_constant()) {
      num = num.exact_quotient(g);
      den = den.exact_quotient(g);
    }
  }
  normalize_scale(num, den);
  num_ = std::move(num);
  den_ = std::move(den);
}

RatFunc RatFunc::from_reduced(Poly num, Poly den) {
  RatFunc r;
  normalize_scale(num, den);
  if (num.is_zero()) den = Poly(num.ring(), BigRat(1));
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  return r;
}

BigRat RatFunc::constant_value() const {
  if (!is_constant()) throw DegenerateInput("rational function is not constant: " + to_string());
  return num_.constant_value() / den_.constant_value();
}

RatFunc RatFunc::in_ring(const RingPtr& target) const {
  return from_reduced(num_.in_ring(target), den_.in_ring(target));
}

RatFunc RatFunc::operator-() const { return from_reduced(-num_, den_); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  if (a.den_.is_constant() || b.den_.is_constant()) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  Poly g = gcd(a.den_, b.den_);
  Poly da = a.den_.exact_quotient(g);
  Poly db = b.den_.exact_quotient(g);
  Poly num = a.num_ * db + b.num_ * da;
  Poly den = a.den_ * db;
  if (num.is_zero()) return RatFunc(num);
  if (!g.is_constant()) {
    Poly h = gcd(num, g);
    if (!h.is_constant()) {
      num = num.exact_quotient(h);
      den = den.exact_quotient(h);
    }
  }
  return RatFunc::from_reduced(std::move(num), std::move(den));
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc(Poly(unite(a.ring(), b.ring())));
  Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  if (!bd.is_constant()) {
    Poly g = gcd(an, bd);
    if (!g.is_constant()) {
      an = an.exact_quotient(g);
      bd = bd.exact_quotient(g);
    }
  }
  if (!ad.is_constant()) {
    Poly g = gcd(bn, ad);
    if (!g.is_constant()) {
      bn = bn.exact_quotient(g);
      ad = ad.exact_quotient(g);
    }
  }
  return RatFunc::from_reduced(an * bn, ad * bd);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of the zero rational function");
  return from_reduced(den_, num_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  return from_reduced(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

RatFunc substitute(const Poly& p, const std::map<std::string, RatFunc>& bindings) {
  RingPtr target = p.ring();
  std::vector<const RatFunc*> image(p.nvars(), nullptr);
  for (const auto& [name, value] : bindings) {
    auto idx = p.ring()->index_of(name);
    if (!idx) throw DegenerateInput("substitution binds unknown variable '" + name + "'");
    image[*idx] = &value;
    target = unite(target, value.ring());
  }
  // Polynomial bindings take the cheaper path.
  std::map<std::string, Poly> polys;
  bool all_poly = true;
  for (const auto& [name, value] : bindings) {
    if (!value.is_polynomial()) {
      all_poly = false;
      break;
    }
    polys.emplace(name, value.num() * (1 / value.den().constant_value()));
  }
  if (all_poly) return RatFunc(p.substitute(polys));

  // p(n/d) * prod d_v^deg_v(p) is a polynomial; build it term by term.
  const std::size_t nv = p.nvars();
  std::vector<Poly::Exp> deg(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (image[v]) deg[v] = p.degree(v);
  }
  std::vector<std::vector<Poly>> npow(nv), dpow(nv);
  auto power = [&](std::vector<Poly>& cache, const Poly& base, Poly::Exp e) -> const Poly& {
    if (cache.empty()) {
      cache.emplace_back(target, BigRat(1));
      cache.push_back(base.in_ring(target));
    }
    while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
  };
  std::vector<std::size_t> map(nv);
  for (std::size_t v = 0; v < nv; ++v) map[v] = *target->index_of(p.ring()->name(v));
  Poly::Builder out(target);
  std::vector<Poly::Exp> rest(target->size());
  for (std::size_t t = 0; t < p.size(); ++t) {
    std::fill(rest.begin(), rest.end(), 0);
    Poly factor(target, BigRat(1));
    auto e = p.exps(t);
    for (std::size_t v = 0; v < nv; ++v) {
      if (image[v]) {
        if (e[v] > 0) factor = factor * power(npow[v], image[v]->num(), e[v]);
        if (deg[v] > e[v]) factor = factor * power(dpow[v], image[v]->den(), deg[v] - e[v]);
      } else {
        rest[map[v]] = e[v];
      }
    }
    out.add_product(factor, rest, p.coeff(t));
  }
  Poly num = out.finish();
  if (num.is_zero()) return RatFunc(num);
  // Cancel whole denominator bases first, then anything left via gcd.
  Poly den(target, BigRat(1));
  for (std::size_t v = 0; v < nv; ++v) {
    if (!image[v] || deg[v] == 0 || image[v]->den().is_constant()) {
      if (image[v] && deg[v] > 0) den *= image[v]->den().in_ring(target).pow(deg[v]);
      continue;
    }
    const Poly base = image[v]->den().in_ring(target);
    Poly::Exp k = deg[v];
    while (k > 0) {
      auto q = num.divide_exact(base);
      if (!q) break;
      num = std::move(*q);
      --k;
    }
    if (k > 0) den *= base.pow(k);
  }
  return RatFunc(std::move(num), std::move(den));
}

RatFunc RatFunc::substitute(const std::map<std::string, RatFunc>& bindings) const {
  std::map<std::string, RatFunc> own;
  for (const auto& [name, value] : bindings) {
    if (ring()->index_of(name)) own.emplace(name, value);
  }
  RatFunc n = dofib::substitute(num_, own);
  if (den_.is_constant()) return n * RatFunc(ring(), 1 / den_.constant_value());
  RatFunc d = dofib::substitute(den_, own);
  if (d.is_zero()) throw DivisionByZero("denominator vanishes after substitution");
  return n / d;
}

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  auto wrap = [](const Poly& p) {
    std::string s = p.to_string();
    return p.size() > 1 || (p.size() == 1 && s.find('*') != std::string::npos) ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

}  // namespace dofib
