#include "dofib/k3fib.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"

namespace dofib {

namespace {

using Vec4 = std::array<RatFunc, 4>;
using Mat4 = std::array<Vec4, 4>;

RatFunc zero_in(const RingPtr& r) { return RatFunc(Poly(r)); }
RatFunc one_in(const RingPtr& r) { return RatFunc(r, BigRat(1)); }

RingPtr ring_with(std::vector<std::string> names, const std::vector<std::string>& params) {
  names.insert(names.end(), params.begin(), params.end());
  return make_ring(std::move(names));
}

RatFunc var(const RingPtr& r, const std::string& name) { return RatFunc(Poly::variable(r, name)); }

// Coordinates x' = N x with the given forms as rows; free rows are filled
// with standard basis vectors keeping N invertible.
ProjectiveChange change_with_rows(const OcticArrangement& arr, const std::map<int, Vec4>& rows) {
  const RingPtr& r = arr.ring();
  std::vector<int> free_rows;
  for (int k = 0; k < 4; ++k) {
    if (!rows.count(k)) free_rows.push_back(k);
  }
  std::vector<int> pick(free_rows.size());
  std::vector<bool> used(4, false);
  std::function<std::optional<ProjectiveChange>(std::size_t)> rec = [&](std::size_t k)
      -> std::optional<ProjectiveChange> {
    if (k == free_rows.size()) {
      Mat4 N;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) N[a][b] = zero_in(r);
      }
      for (const auto& [row, v] : rows) N[row] = v;
      for (std::size_t q = 0; q < free_rows.size(); ++q) N[free_rows[q]][pick[q]] = one_in(r);
      try {
        ProjectiveChange inv(N);
        return ProjectiveChange(inv.inverse());
      } catch (const DegenerateInput&) {
        return std::nullopt;
      }
    }
    for (int b = 0; b < 4; ++b) {
      if (used[b]) continue;
      used[b] = true;
      pick[k] = b;
      if (auto c = rec(k + 1)) return c;
      used[b] = false;
    }
    return std::nullopt;
  };
  auto c = rec(0);
  if (!c) throw DegenerateInput("the given forms are linearly dependent");
  return *c;
}

std::vector<BigRat> rational_roots(const Poly& p, std::size_t v) {
  // Candidates +-a/b with a | constant term and b | leading coefficient of
  // the integer-primitive polynomial; trial evaluation.
  std::vector<BigRat> out;
  std::vector<Poly> coeffs = p.primitive().coefficients_in(v);
  std::size_t low = 0;
  while (low < coeffs.size() && coeffs[low].is_zero()) ++low;
  if (low > 0) out.push_back(BigRat(0));
  if (low + 1 >= coeffs.size()) return out;
  BigInt c0 = abs(coeffs[low].constant_value().get_num());
  BigInt cn = abs(coeffs.back().constant_value().get_num());
  auto divisors = [](BigInt n) {
    std::vector<BigInt> d;
    for (BigInt k = 1; k * k <= n; ++k) {
      if (n % k == 0) {
        d.push_back(k);
        if (k * k != n) d.push_back(n / k);
      }
    }
    return d;
  };
  if (c0 > BigInt(1000000) || cn > BigInt(1000000)) return out;  // not worth the trial division
  std::set<BigRat> cands;
  for (const auto& a : divisors(c0)) {
    for (const auto& b : divisors(cn)) {
      BigRat q(a, b);
      q.canonicalize();
      cands.insert(q);
      cands.insert(-q);
    }
  }
  const std::string& name = p.ring()->name(v);
  for (const auto& q : cands) {
    if (p.evaluate({{name, q}}).is_zero()) out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Kummer

KummerFibration kummer(const OcticArrangement& arr) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!arr.plane(i).c[3].is_zero()) throw NotNormalized("planes 1-4 must omit t");
  }
  for (std::size_t i = 4; i < 8; ++i) {
    if (!arr.plane(i).c[0].is_zero()) throw NotNormalized("planes 5-8 must omit x");
  }
  KummerFibration k;
  k.s1_branch = arr.scale();
  k.s2_branch = one_in(arr.ring());
  for (std::size_t i = 0; i < 4; ++i) k.s1_branch *= arr.plane_expression(i);
  for (std::size_t i = 4; i < 8; ++i) k.s2_branch *= arr.plane_expression(i);
  k.pencil = "pencil of planes through the line " + arr.vars()[0] + " = " + arr.vars()[3] + " = 0";
  k.quotient = "(S1 x_P1 S2)/(i1 x i2)";
  return k;
}

// ---------------------------------------------------------------- sextics

SexticFamily sextic_family(const OcticArrangement& arr, std::size_t i, std::size_t j) {
  if (i == j || i >= 8 || j >= 8) throw BadSeed("a line needs two distinct planes");
  auto rep = analyze(arr);
  const std::size_t a = std::min(i, j), b = std::max(i, j);
  for (const auto& l : rep.lines) {
    if (std::find(l.planes.begin(), l.planes.end(), a) != l.planes.end() &&
        std::find(l.planes.begin(), l.planes.end(), b) != l.planes.end() && l.multiplicity() >= 4) {
      throw BadSeed("the line has multiplicity " + std::to_string(l.multiplicity()));
    }
  }
  ProjectiveChange change = change_with_rows(arr, {{2, arr.plane(i).c}, {3, arr.plane(j).c}});
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < 8; ++k) {
    if (k != i && k != j) order.push_back(k);
  }
  order.push_back(i);
  order.push_back(j);

  SexticFamily f{arr.transformed(change).reordered(order)};
  const auto& n = f.normalized;
  RingPtr r = ring_with({n.vars()[0], n.vars()[1], n.vars()[2], n.vars()[3], f.parameter}, n.params());
  const RatFunc x = var(r, n.vars()[0]), y = var(r, n.vars()[1]), z = var(r, n.vars()[2]);
  const RatFunc t = var(r, n.vars()[3]), s = var(r, f.parameter);
  f.fiber_branch = n.scale().in_ring(r);
  f.fiber_at_infinity = f.fiber_branch;
  for (std::size_t k = 0; k < 6; ++k) {
    LinearForm form = n.plane(k);
    for (auto& c : form.c) c = c.in_ring(r);
    f.lines.push_back(form.eval({x, y, z, s * z}));
    f.fiber_branch *= f.lines.back();
    f.fiber_at_infinity *= form.eval({x, y, zero_in(r), t});
  }
  return f;
}

std::vector<SpecialFiber> sextic_special_fibers(const SexticFamily& f) {
  const RingPtr& r = f.lines.front().ring();
  const auto& vars = f.normalized.vars();
  const std::size_t sv = *r->index_of(f.parameter);
  // Coefficients of each line in (x, y, z) as polynomials after clearing denominators.
  std::vector<std::array<RatFunc, 3>> L;
  for (const auto& line : f.lines) {
    std::array<RatFunc, 3> c;
    for (int k = 0; k < 3; ++k) {
      std::map<std::string, RatFunc> at;
      for (int m = 0; m < 3; ++m) at.emplace(vars[m], RatFunc(r, BigRat(m == k ? 1 : 0)));
      c[k] = line.substitute(at);
    }
    L.push_back(c);
  }
  auto condition = [&](const std::vector<RatFunc>& minors) -> std::optional<Poly> {
    Poly g(r);
    for (const auto& m : minors) {
      if (m.is_zero()) continue;
      g = gcd(g, m.num());
      if (g.is_constant()) return std::nullopt;
    }
    if (g.is_zero()) return Poly(r, BigRat(0));  // identically degenerate
    if (!g.involves(sv)) return std::nullopt;
    Poly radical(r, BigRat(1));
    for (const auto& f : squarefree_decomposition(g)) radical *= f;
    return radical;
  };
  std::vector<SpecialFiber> out;
  auto record = [&](std::string kind, std::vector<std::size_t> idx, Poly cond) {
    SpecialFiber sf{std::move(kind), std::move(idx), cond.primitive(), {}};
    bool param_free = true;
    for (std::size_t v : cond.support()) param_free = param_free && v == sv;
    if (param_free && !cond.is_zero()) sf.rational_roots = rational_roots(cond, sv);
    out.push_back(std::move(sf));
  };
  const std::size_t n = L.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<RatFunc> minors;
      for (int p = 0; p < 3; ++p) {
        for (int q = p + 1; q < 3; ++q) minors.push_back(L[a][p] * L[b][q] - L[a][q] * L[b][p]);
      }
      if (auto c = condition(minors)) record("coincident", {a, b}, *c);
    }
  }
  auto det3 = [](const std::array<RatFunc, 3>& u, const std::array<RatFunc, 3>& v, const std::array<RatFunc, 3>& w) {
    return u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          std::vector<RatFunc> minors{det3(L[a], L[b], L[c]), det3(L[a], L[b], L[d]), det3(L[a], L[c], L[d]),
                                      det3(L[b], L[c], L[d])};
          if (auto cnd = condition(minors)) record("concurrent", {a, b, c, d}, *cnd);
        }
  return out;
}

// ---------------------------------------------------------------- quadrics

QuadricFamily quadric_family(const OcticArrangement& arr, const std::array<std::size_t, 4>& seed,
                             const std::optional<std::array<RatFunc, 4>>& scales) {
  Normalized nz = normalize_skew_lines(arr, seed, scales);
  QuadricFamily f{nz.arrangement, seed, nz.change};
  const auto& n = f.normalized;
  f.ring = ring_with({"p0", "p1", "q0", "q1", "l"}, n.params());
  const RingPtr& r = f.ring;
  const RatFunc p0 = var(r, "p0"), p1 = var(r, "p1"), q0 = var(r, "q0"), q1 = var(r, "q1"), l = var(r, "l");
  const Vec4 point{p0 * q0, p0 * q1, p1 * q0, l * p1 * q1};
  // The seed planes are c_k times the k-th coordinate; their product is
  // (prod c_k) l (p0 p1 q0 q1)^2.
  RatFunc constant = n.scale().in_ring(r);
  for (std::size_t k = 0; k < 4; ++k) {
    const LinearForm& form = n.plane(k);
    for (std::size_t m = 0; m < 4; ++m) {
      if ((m == k) == form.c[m].is_zero()) throw NotSkew("seed planes did not normalize to coordinates");
    }
    constant *= form.c[k].in_ring(r);
  }
  f.factors.push_back(constant * l);
  for (std::size_t k = 4; k < 8; ++k) {
    LinearForm form = n.plane(k);
    for (auto& c : form.c) c = c.in_ring(r);
    f.factors.push_back(form.eval(point));
  }
  f.branch = one_in(r);
  for (const auto& g : f.factors) f.branch *= g;
  return f;
}

NodeEllipticFibration node_elliptic(const QuadricFamily& f, NodeChart chart) {
  RingPtr r = unite(f.ring, make_ring({"t0", "t1"}));
  const RatFunc t0 = var(r, "t0"), t1 = var(r, "t1");
  NodeEllipticFibration out{chart};
  std::map<std::string, RatFunc> sub;
  std::array<std::string, 2> fixed;
  if (chart == NodeChart::P0Q1) {
    sub.emplace("q0", var(r, "p1") * t1);
    sub.emplace("q1", var(r, "p0") * t0);
    out.fiber = {"p0", "p1"};
    fixed = {"p0", "q1"};
  } else {
    sub.emplace("p0", var(r, "q1") * t1);
    sub.emplace("p1", var(r, "q0") * t0);
    out.fiber = {"q0", "q1"};
    fixed = {"p1", "q0"};
  }
  // The node must lie on two distinct branch factors.
  std::size_t through = 0;
  for (std::size_t k = 1; k < f.factors.size(); ++k) {
    if (f.factors[k].substitute({{fixed[0], zero_in(f.ring)}, {fixed[1], zero_in(f.ring)}}).is_zero()) ++through;
  }
  if (through < 2) throw NotANode("the point is not on two branch factors");

  // Substitute factor by factor; split off monomials and constants.
  std::vector<Poly::Exp> mono(r->size(), 0);
  RatFunc constant = one_in(r);
  std::vector<Poly> parts;
  for (const auto& g : f.factors) {
    RatFunc h = g.in_ring(r).substitute(sub);
    if (h.is_zero()) throw NotANode("a branch factor vanishes on the pencil");
    constant *= RatFunc(h.den().in_ring(r)).inverse();
    Poly num = h.num();
    auto lo = num.min_exponents();
    for (std::size_t v = 0; v < lo.size(); ++v) mono[v] += lo[v];
    num = num.unshifted(lo);
    const BigRat c = num.leading_coeff() / num.primitive().leading_coeff();
    constant *= RatFunc(r, c);
    num = num.primitive();
    if (!num.is_constant()) parts.push_back(num);
  }
  // Parameter-only parts are constants for the fibration.
  std::vector<Poly> fiber_parts;
  for (auto& p : parts) {
    bool on_fiber = false;
    for (const char* v : {"p0", "p1", "q0", "q1", "l", "t0", "t1"}) on_fiber = on_fiber || p.involves(v);
    if (on_fiber) {
      fiber_parts.push_back(p);
    } else {
      constant *= RatFunc(p);
    }
  }
  for (std::size_t a = 0; a < fiber_parts.size(); ++a) {
    for (std::size_t b = a + 1; b < fiber_parts.size(); ++b) {
      if (!gcd(fiber_parts[a], fiber_parts[b]).is_constant()) {
        throw NotANode("two branch factors share a component on the pencil");
      }
    }
  }
  // Squares: even monomial exponents and the square part of the constant.
  RatFunc square = one_in(r);
  std::vector<Poly::Exp> half(mono.size()), odd(mono.size());
  for (std::size_t v = 0; v < mono.size(); ++v) {
    half[v] = mono[v] / 2;
    odd[v] = mono[v] % 2;
  }
  square *= RatFunc(Poly::monomial(r, half, BigRat(1)));
  auto cs = extract_square(constant.num());
  auto ds = extract_square(constant.den());
  square *= RatFunc(cs.root, ds.root);
  RatFunc kept = RatFunc(cs.squarefree) * RatFunc(ds.squarefree).inverse();
  if (!(kept == one_in(r))) out.factors.push_back(kept);
  for (std::size_t v = 0; v < odd.size(); ++v) {
    if (odd[v]) out.factors.push_back(RatFunc(Poly::variable(r, v)));
  }
  for (auto& p : fiber_parts) out.factors.push_back(RatFunc(p));
  out.model = one_in(r);
  for (const auto& g : out.factors) out.model *= g;
  out.square = square;
  return out;
}

// ---------------------------------------------------------------- census

Census fibration_census(const OcticArrangement& arr, bool build) {
  auto rep = analyze(arr);
  if (!rep.admissible) throw InvalidArrangement("census needs an admissible arrangement");
  Census c;
  c.skew_line_pairs = find_fibration_seeds(arr, rep).skew_pairs.size();
  GenericityLog log;
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = a + 1; b < 8; ++b)
      for (std::size_t d = b + 1; d < 8; ++d)
        for (std::size_t e = d + 1; e < 8; ++e) {
          // Independence of the four planes: the pencil's base lines are skew.
          IncidenceLine l1{{a, b}}, l2{{d, e}};
          if (!lines_skew(arr, l1, l2, &log)) continue;
          const std::array<std::size_t, 4> q{a, b, d, e};
          // Pairings {q0 q1 | q2 q3}, {q0 q2 | q1 q3}, {q0 q3 | q1 q2}: seed
          // (first of pair one, both of pair two, second of pair one).
          const std::array<std::array<std::size_t, 4>, 3> seeds{{{q[0], q[2], q[3], q[1]},
                                                                  {q[0], q[1], q[3], q[2]},
                                                                  {q[0], q[1], q[2], q[3]}}};
          for (const auto& s : seeds) {
            CensusEntry entry{s, RatFunc()};
            if (build) entry.branch = quadric_family(arr, s).branch;
            c.entries.push_back(std::move(entry));
          }
        }
  c.conditions = log.conditions();
  for (const auto& p : rep.conditions) c.conditions.push_back(p);
  return c;
}

}  // namespace dofib
