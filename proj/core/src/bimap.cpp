#include "dofib/bimap.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"

namespace dofib {

void CancelToken::check() const {
  if (cancelled()) throw Cancelled("operation cancelled");
}

namespace {

void poll(const CancelToken* c) {
  if (c) c->check();
}

std::map<std::string, RatFunc> bindings_of(const DoubleCoverMap& m) {
  std::map<std::string, RatFunc> out;
  for (const auto& [name, value] : m.components) out.emplace(name, value);
  return out;
}

// Pairwise coprime square-free factors with integer exponents, plus a
// rational constant. Products are never expanded.
class FactorBase {
 public:
  void add(const Poly& p, int e) {
    if (e == 0) return;
    if (p.is_zero()) throw DivisionByZero("zero factor in a factored product");
    if (p.is_constant()) {
      mul_constant(p.leading_coeff(), e);
      return;
    }
    const Poly prim = p.primitive();
    mul_constant(p.leading_coeff() / prim.leading_coeff(), e);
    std::vector<Poly> parts = squarefree_decomposition(prim);
    Poly rebuilt(prim.ring(), BigRat(1));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].is_constant()) continue;
      Poly f = parts[i].primitive();
      rebuilt *= f.pow(static_cast<unsigned>(i + 1));
      insert(f, e * static_cast<int>(i + 1));
    }
    // The decomposition may shed a constant; keep the product exact.
    auto q = prim.divide_exact(rebuilt);
    if (q && q->is_constant()) mul_constant(q->leading_coeff(), e);
  }

  void add(const RatFunc& f, int e) {
    add(f.num(), e);
    add(f.den(), -e);
  }

  const std::vector<std::pair<Poly, int>>& factors() const { return base_; }
  const BigRat& constant() const { return constant_; }

  /// Square-free part (exponents mod 2, constant reduced to a square-free
  /// integer) as a polynomial over `ring`.
  Poly squarefree(const RingPtr& ring) const {
    Poly out(ring, BigRat(square_free_integer()));
    for (const auto& [f, e] : base_) {
      if (e % 2 != 0) out *= f.in_ring(ring);
    }
    return out;
  }

  /// s with product = s^2 * squarefree.
  RatFunc root(const RingPtr& ring) const {
    Poly num(ring, BigRat(1)), den(ring, BigRat(1));
    for (const auto& [f, e] : base_) {
      const int h = e >= 0 ? e / 2 : -((-e + 1) / 2);
      if (h > 0) num *= f.in_ring(ring).pow(static_cast<unsigned>(h));
      if (h < 0) den *= f.in_ring(ring).pow(static_cast<unsigned>(-h));
    }
    // constant = k * outer^2 with k square-free
    const BigRat k = square_free_integer();
    const BigRat ratio = constant_ / k;
    BigInt rn, rd;
    mpz_sqrt(rn.get_mpz_t(), ratio.get_num().get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), ratio.get_den().get_mpz_t());
    return RatFunc(num * BigRat(rn, rd), den);
  }

  bool is_one() const { return base_.empty() && constant_ == 1; }
  bool free_of(const std::vector<std::string>& names) const {
    for (const auto& [f, e] : base_) {
      if (e % 2 == 0) continue;
      for (const auto& n : names) {
        if (f.involves(n)) return false;
      }
    }
    return true;
  }

 private:
  void mul_constant(const BigRat& c, int e) {
    if (c == 0) throw DivisionByZero("zero constant in a factored product");
    BigRat p = 1;
    for (int i = 0; i < std::abs(e); ++i) p *= c;
    if (e > 0) {
      constant_ *= p;
    } else {
      constant_ /= p;
    }
  }

  // Integer k, square-free, with constant_ = k * (rational square).
  BigInt square_free_integer() const {
    BigInt ab = constant_.get_num() * constant_.get_den();
    auto [sq, free] = split_square(ab);
    (void)sq;
    return free;
  }

  void insert(Poly p, int e) {
    if (e == 0 || p.is_constant()) {
      if (p.is_constant() && e != 0) mul_constant(p.leading_coeff(), e);
      return;
    }
    for (std::size_t i = 0; i < base_.size(); ++i) {
      Poly g = gcd(p, base_[i].first);
      if (g.is_constant()) continue;
      auto [b, eb] = base_[i];
      base_.erase(base_.begin() + static_cast<std::ptrdiff_t>(i));
      insert(b.exact_quotient(g), eb);
      insert(g, eb + e);
      insert(p.exact_quotient(g), e);
      return;
    }
    base_.emplace_back(std::move(p), e);
  }

  std::vector<std::pair<Poly, int>> base_;
  BigRat constant_ = 1;
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

RingPtr DoubleCoverMap::source_ring() const {
  std::vector<std::string> names = source_coords;
  names.insert(names.end(), source_params.begin(), source_params.end());
  return make_ring(names);
}

const RatFunc& DoubleCoverMap::component(const std::string& target) const {
  auto it = components.find(target);
  if (it == components.end()) throw DegenerateInput("map has no component for " + target);
  return it->second;
}

DoubleCoverMap DoubleCoverMap::identity(const std::vector<std::string>& coords,
                                        const std::vector<std::string>& params) {
  DoubleCoverMap m;
  m.source_coords = m.target_coords = coords;
  m.source_params = m.target_params = params;
  RingPtr r = m.source_ring();
  for (const auto& n : coords) m.components.emplace(n, RatFunc(Poly::variable(r, n)));
  for (const auto& n : params) m.components.emplace(n, RatFunc(Poly::variable(r, n)));
  m.multiplier = SqrtScalar(RatFunc(r, BigRat(1)));
  return m;
}

DoubleCoverMap DoubleCoverMap::rescaled(const RatFunc& h) const {
  if (h.is_zero()) throw DegenerateInput("rescaling by zero");
  DoubleCoverMap out = *this;
  for (const auto& n : target_coords) out.components.at(n) = component(n) * h;
  if (multiplier) {
    const RatFunc h2 = h * h;
    out.multiplier = SqrtScalar(multiplier->coeff() * h2 * h2, RatFunc(multiplier->radicand()));
  }
  return out;
}

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Verified: return "verified";
    case CertStatus::TwistMismatch: return "twist_mismatch";
    case CertStatus::Failed: return "failed";
  }
  return "failed";
}

std::vector<RatFunc> branch_factors(const OcticArrangement& arr) {
  std::vector<RatFunc> out;
  out.push_back(arr.scale().in_ring(arr.ring()));
  for (std::size_t i = 0; i < arr.planes().size(); ++i) out.push_back(arr.plane_expression(i));
  return out;
}

Certification verify(const DoubleCoverMap& phi, const std::vector<RatFunc>& source_factors,
                     const std::vector<RatFunc>& target_factors, const CancelToken* cancel) {
  const auto start = std::chrono::steady_clock::now();
  for (const auto& n : phi.target_coords) {
    if (!phi.components.count(n)) throw DegenerateInput("map has no component for " + n);
  }
  bool all_zero = true;
  for (const auto& n : phi.target_coords) all_zero = all_zero && phi.component(n).is_zero();
  if (all_zero) throw NotDominant("every coordinate component vanishes");

  const auto bindings = bindings_of(phi);
  RingPtr ring = phi.source_ring();
  FactorBase ratio;
  for (const RatFunc& f : target_factors) {
    poll(cancel);
    RatFunc pulled = f.substitute(bindings);
    if (pulled.is_zero()) throw NotDominant("the target branch pulls back to zero along " + f.to_string());
    ratio.add(pulled, 1);
  }
  for (const RatFunc& f : source_factors) {
    poll(cancel);
    ratio.add(f, -1);
  }
  for (const auto& [f, e] : ratio.factors()) ring = unite(ring, f.ring());

  Certification cert;
  cert.square_factor = ratio.root(ring);
  const Poly d = ratio.squarefree(ring);
  cert.root = SqrtScalar(cert.square_factor, RatFunc(d));
  cert.ratio = RatFunc(Poly(ring, BigRat(1)));

  if (!ratio.free_of(phi.source_coords)) {
    cert.status = CertStatus::Failed;
    cert.residual_twist = RatFunc(d);
    cert.note = "pullback ratio is not a square up to a factor free of " + join(phi.source_coords);
  } else if (!phi.multiplier) {
    cert.residual_twist = RatFunc(d);
    cert.status = d.is_one() ? CertStatus::Verified : CertStatus::TwistMismatch;
    cert.note = "multiplier derived from the pullback";
  } else {
    FactorBase residual = ratio;
    residual.add(phi.multiplier->coeff(), -2);
    residual.add(phi.multiplier->radicand(), -1);
    poll(cancel);
    const Poly rd = residual.squarefree(ring);
    cert.residual_twist = RatFunc(rd);
    if (residual.is_one()) {
      cert.status = CertStatus::Verified;
      cert.residual_twist = RatFunc(Poly(ring, BigRat(1)));
      cert.sign_flipped = cert.root == -*phi.multiplier;
    } else if (!rd.is_one()) {
      cert.status = CertStatus::TwistMismatch;
      cert.note = "multiplier squared differs from the pullback ratio by a non-square";
    } else {
      cert.status = CertStatus::Failed;
      cert.note = "multiplier squared differs from the pullback ratio by the square of " +
                  residual.root(ring).to_string();
    }
  }
  cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

Certification verify(const DoubleCoverMap& phi, const OcticArrangement& source, const OcticArrangement& target,
                     const CancelToken* cancel) {
  return verify(phi, branch_factors(source), branch_factors(target), cancel);
}

DoubleCoverMap compose(const DoubleCoverMap& phi, const DoubleCoverMap& psi, const CancelToken* cancel) {
  DoubleCoverMap out;
  out.source_coords = psi.source_coords;
  out.source_params = psi.source_params;
  out.target_coords = phi.target_coords;
  out.target_params = phi.target_params;
  const auto bindings = bindings_of(psi);
  for (const auto& [name, value] : phi.components) {
    poll(cancel);
    out.components.emplace(name, value.substitute(bindings));
  }
  if (phi.multiplier && psi.multiplier) {
    out.multiplier = phi.multiplier->substitute(bindings) * *psi.multiplier;
  }
  return out;
}

DoubleCoverMap primitive_coordinates(const DoubleCoverMap& m) {
  RingPtr r = m.source_ring();
  Poly lcm(r, BigRat(1));
  for (const auto& n : m.target_coords) {
    const Poly& d = m.component(n).den();
    lcm = lcm * d.exact_quotient(gcd(lcm, d));
  }
  Poly g(r);
  for (const auto& n : m.target_coords) {
    const RatFunc scaled = m.component(n) * RatFunc(lcm);
    g = gcd(g, scaled.num());
  }
  if (g.is_zero()) throw NotDominant("every coordinate component vanishes");
  return m.rescaled(RatFunc(lcm, g));
}

std::optional<RatFunc> projectively_equivalent(const DoubleCoverMap& phi, const DoubleCoverMap& psi) {
  if (phi.target_coords != psi.target_coords || phi.target_params != psi.target_params) return std::nullopt;
  for (const auto& n : phi.target_params) {
    auto a = phi.components.find(n), b = psi.components.find(n);
    const bool ha = a != phi.components.end(), hb = b != psi.components.end();
    if (ha != hb || (ha && !(a->second == b->second))) return std::nullopt;
  }
  std::optional<RatFunc> h;
  for (const auto& n : phi.target_coords) {
    const RatFunc& v = phi.component(n);
    const RatFunc& w = psi.component(n);
    if (w.is_zero() != v.is_zero()) return std::nullopt;
    if (w.is_zero()) continue;
    if (!h) {
      h = v / w;
    } else if (!(v == *h * w)) {
      return std::nullopt;
    }
  }
  return h;
}

std::vector<RatFunc> roots_in(const std::vector<RatFunc>& factors, const std::string& v) {
  std::vector<RatFunc> out;
  for (const RatFunc& f : factors) {
    auto idx = f.ring()->index_of(v);
    if (!idx || !f.num().involves(*idx)) {
      if (idx && f.den().involves(*idx)) throw NonlinearFactor("factor has " + v + " in its denominator");
      continue;
    }
    if (f.den().involves(*idx)) throw NonlinearFactor("factor has " + v + " in its denominator");
    std::vector<Poly> c = f.num().coefficients_in(*idx);
    if (c.size() > 2) {
      throw NonlinearFactor("factor " + f.to_string() + " has degree " + std::to_string(c.size() - 1) +
                            " in " + v);
    }
    out.push_back(-RatFunc(c[0], c[1]));
  }
  return out;
}

QuadrupleMatch match_quadruples(const std::array<RatFunc, 4>& qA, const std::array<RatFunc, 4>& qB,
                                const std::map<std::string, RatFunc>& substitution) {
  std::vector<RatFunc> sub;
  for (const RatFunc& q : qB) sub.push_back(substitution.empty() ? q : q.substitute(substitution));
  auto point = [](const RatFunc& v) { return ProjPoint::value(v); };
  const RatFunc target = cross_ratio({point(qA[0]), point(qA[1]), point(qA[2]), point(qA[3])});

  std::array<int, 4> perm{0, 1, 2, 3};
  std::vector<std::pair<std::array<int, 4>, Mobius>> hits;
  std::size_t candidates = 0;
  do {
    const RatFunc c = cross_ratio({point(sub[perm[0]]), point(sub[perm[1]]), point(sub[perm[2]]),
                                   point(sub[perm[3]])});
    if (!(c == target)) continue;
    ++candidates;
    Mobius m = Mobius::from_pairs({point(sub[perm[0]]), point(sub[perm[1]]), point(sub[perm[2]])},
                                  {point(qA[0]), point(qA[1]), point(qA[2])});
    if (m.apply(point(sub[perm[3]])) == point(qA[3])) hits.emplace_back(perm, std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (hits.empty()) throw NoMatch("no reordering of the second quadruple has the cross-ratio of the first");
  std::optional<QuadrupleMatch> found = QuadrupleMatch{hits.front().first, hits.front().second, {}, 0, hits};
  found->substituted = std::move(sub);
  found->candidates = candidates;
  return *found;
}

}  // namespace dofib
