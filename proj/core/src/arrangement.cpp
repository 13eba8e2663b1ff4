#include "dofib/arrangement.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"
#include "dofib/parse.hpp"

namespace dofib {

namespace {

using Vec4 = std::array<RatFunc, 4>;
using Mat4 = std::array<Vec4, 4>;

RatFunc zero_in(const RingPtr& r) { return RatFunc(Poly(r)); }
RatFunc one_in(const RingPtr& r) { return RatFunc(r, BigRat(1)); }

RatFunc det2(const RatFunc& a, const RatFunc& b, const RatFunc& c, const RatFunc& d) {
  return a * d - b * c;
}

// Determinant of the 3x3 matrix formed by columns `cols` of rows r0, r1, r2.
RatFunc det3(const Vec4& r0, const Vec4& r1, const Vec4& r2, std::array<int, 3> cols) {
  const auto [a, b, c] = cols;
  return r0[a] * det2(r1[b], r1[c], r2[b], r2[c]) - r0[b] * det2(r1[a], r1[c], r2[a], r2[c]) +
         r0[c] * det2(r1[a], r1[b], r2[a], r2[b]);
}

RatFunc det4(const Mat4& m) {
  RatFunc acc = zero_in(m[0][0].ring());
  for (int j = 0; j < 4; ++j) {
    std::array<int, 3> cols{};
    int k = 0;
    for (int c = 0; c < 4; ++c) {
      if (c != j) cols[k++] = c;
    }
    RatFunc minor = det3(m[1], m[2], m[3], cols);
    acc += (j % 2 == 0 ? m[0][j] : -m[0][j]) * minor;
  }
  return acc;
}

// Inverse by the adjugate; throws NotSkew-like degeneracy via the caller.
std::optional<Mat4> invert(const Mat4& m) {
  RatFunc d = det4(m);
  if (d.is_zero()) return std::nullopt;
  Mat4 inv = m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // cofactor C_ji
      std::array<int, 3> rows{}, cols{};
      int r = 0, c = 0;
      for (int k = 0; k < 4; ++k) {
        if (k != j) rows[r++] = k;
        if (k != i) cols[c++] = k;
      }
      RatFunc minor = det3(m[rows[0]], m[rows[1]], m[rows[2]], cols);
      inv[i][j] = ((i + j) % 2 == 0 ? minor : -minor) / d;
    }
  }
  return inv;
}

// Kernel vector of a rank-3 set of three forms (cofactor expansion).
Vec4 kernel3(const Vec4& a, const Vec4& b, const Vec4& c) {
  return {det3(a, b, c, {1, 2, 3}), -det3(a, b, c, {0, 2, 3}), det3(a, b, c, {0, 1, 3}),
          -det3(a, b, c, {0, 1, 2})};
}

// Scale a projective point so its first nonzero coordinate is 1.
Vec4 normalize_point_coords(Vec4 p) {
  for (const auto& x : p) {
    if (!x.is_zero()) {
      RatFunc inv = x.inverse();
      for (auto& y : p) y = y * inv;
      return p;
    }
  }
  return p;
}

bool rank_at_least_2(const Vec4& a, const Vec4& b, GenericityLog& log) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (log.nonzero(det2(a[i], a[j], b[i], b[j]))) return true;
    }
  }
  return false;
}

bool rank_3(const Vec4& a, const Vec4& b, const Vec4& c, GenericityLog& log) {
  const std::array<std::array<int, 3>, 4> all{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& cols : all) {
    if (log.nonzero(det3(a, b, c, cols))) return true;
  }
  return false;
}

LinearForm scaled(const LinearForm& f, const RatFunc& s) {
  LinearForm g = f;
  for (auto& x : g.c) x = x * s;
  return g;
}

}  // namespace

// ---------------------------------------------------------------- LinearForm

bool LinearForm::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const RatFunc& x) { return x.is_zero(); });
}

RatFunc LinearForm::eval(const std::array<RatFunc, 4>& p) const {
  return c[0] * p[0] + c[1] * p[1] + c[2] * p[2] + c[3] * p[3];
}

RatFunc LinearForm::expression(const RingPtr& ring, const std::array<std::string, 4>& coords) const {
  RatFunc acc = zero_in(ring);
  for (int i = 0; i < 4; ++i) {
    if (!c[i].is_zero()) acc += c[i] * RatFunc(Poly::variable(ring, coords[i]));
  }
  return acc;
}

// ---------------------------------------------------------------- ProjectiveChange

ProjectiveChange::ProjectiveChange(Mat4 matrix) : m_(std::move(matrix)), inv_(m_) {
  auto inv = invert(m_);
  if (!inv) throw DegenerateInput("projective change matrix is singular");
  inv_ = std::move(*inv);
}

ProjectiveChange ProjectiveChange::identity(const RingPtr& ring) {
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m[i][j] = i == j ? one_in(ring) : zero_in(ring);
  }
  return ProjectiveChange(m);
}

LinearForm ProjectiveChange::pull_back(const LinearForm& f) const {
  LinearForm g;
  for (int j = 0; j < 4; ++j) {
    RatFunc acc = zero_in(f.c[0].ring());
    for (int i = 0; i < 4; ++i) acc += f.c[i] * m_[i][j];
    g.c[j] = acc;
  }
  return g;
}

LinearForm ProjectiveChange::push_forward(const LinearForm& f) const {
  LinearForm g;
  for (int j = 0; j < 4; ++j) {
    RatFunc acc = zero_in(f.c[0].ring());
    for (int i = 0; i < 4; ++i) acc += f.c[i] * inv_[i][j];
    g.c[j] = acc;
  }
  return g;
}

std::array<RatFunc, 4> ProjectiveChange::map_point(const std::array<RatFunc, 4>& p) const {
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    RatFunc acc = zero_in(p[0].ring());
    for (int j = 0; j < 4; ++j) acc += inv_[i][j] * p[j];
    out[i] = acc;
  }
  return out;
}

bool ProjectiveChange::is_identity() const {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j && !m_[i][j].is_zero()) return false;
      if (i == j && !(m_[i][j] - m_[0][0]).is_zero()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- GenericityLog

bool GenericityLog::nonzero(const RatFunc& value) {
  if (value.is_zero()) return false;
  if (!value.num().is_constant()) {
    Poly cond = value.num().primitive();
    if (strict_) {
      throw ParameterDegeneracy("rank decision assumes " + cond.to_string() + " != 0");
    }
    if (std::find(conditions_.begin(), conditions_.end(), cond) == conditions_.end()) {
      conditions_.push_back(std::move(cond));
    }
  }
  return true;
}

// ---------------------------------------------------------------- OcticArrangement

OcticArrangement::OcticArrangement(std::string label, std::array<std::string, 4> vars,
                                   std::vector<std::string> params, std::vector<LinearForm> planes,
                                   std::optional<RatFunc> scale)
    : label_(std::move(label)), vars_(std::move(vars)), params_(std::move(params)),
      planes_(std::move(planes)) {
  if (planes_.size() != 8) {
    throw InvalidArrangement("an octic arrangement needs exactly 8 planes, got " +
                             std::to_string(planes_.size()));
  }
  std::vector<std::string> names(vars_.begin(), vars_.end());
  names.insert(names.end(), params_.begin(), params_.end());
  ring_ = make_ring(names);
  for (auto& f : planes_) {
    for (auto& x : f.c) x = x.in_ring(ring_);
  }
  scale_ = scale ? scale->in_ring(ring_) : one_in(ring_);
}

OcticArrangement OcticArrangement::from_expressions(std::string label, std::array<std::string, 4> vars,
                                                    std::vector<std::string> params,
                                                    const std::vector<std::string>& planes) {
  std::vector<std::string> names(vars.begin(), vars.end());
  names.insert(names.end(), params.begin(), params.end());
  RingPtr ring = make_ring(names);
  std::vector<LinearForm> forms;
  for (const auto& text : planes) {
    RatFunc e = parse_ratfunc(text, ring);
    for (const auto& v : vars) {
      if (e.den().involves(v)) throw ParseError("plane \"" + text + "\" has a coordinate in a denominator");
    }
    const Poly& num = e.num();
    std::vector<std::size_t> coord_idx;
    for (const auto& v : vars) coord_idx.push_back(*ring->index_of(v));
    if (num.homogeneous_degree(coord_idx) != std::optional<std::uint32_t>(1) && !num.is_zero()) {
      throw ParseError("plane \"" + text + "\" is not a homogeneous linear form in the coordinates");
    }
    LinearForm f;
    for (int i = 0; i < 4; ++i) {
      Poly ci = num.coefficients_in(coord_idx[i]).size() > 1 ? num.coefficients_in(coord_idx[i])[1]
                                                             : Poly(ring);
      f.c[i] = RatFunc(ci, e.den());
    }
    forms.push_back(std::move(f));
  }
  return OcticArrangement(std::move(label), std::move(vars), std::move(params), std::move(forms));
}

RatFunc OcticArrangement::plane_expression(std::size_t i) const {
  return planes_.at(i).expression(ring_, vars_);
}

RatFunc OcticArrangement::octic() const {
  RatFunc acc = scale_;
  for (std::size_t i = 0; i < 8; ++i) acc *= plane_expression(i);
  return acc;
}

OcticArrangement OcticArrangement::specialize(const std::map<std::string, BigRat>& values) const {
  std::map<std::string, RatFunc> b;
  std::vector<std::string> rest;
  for (const auto& p : params_) {
    auto it = values.find(p);
    if (it != values.end()) {
      b.emplace(p, RatFunc(ring_, it->second));
    } else {
      rest.push_back(p);
    }
  }
  for (const auto& [name, _] : values) {
    if (std::find(params_.begin(), params_.end(), name) == params_.end()) {
      throw DegenerateInput("unknown parameter '" + name + "'");
    }
  }
  std::vector<std::string> names(vars_.begin(), vars_.end());
  names.insert(names.end(), rest.begin(), rest.end());
  RingPtr r = make_ring(names);
  std::vector<LinearForm> forms = planes_;
  for (auto& f : forms) {
    for (auto& x : f.c) x = x.substitute(b).in_ring(r);
  }
  RatFunc s = scale_.substitute(b);
  if (s.is_zero()) throw ParameterDegeneracy("arrangement scale vanishes at the specialization");
  return OcticArrangement(label_, vars_, rest, std::move(forms), s.in_ring(r));
}

OcticArrangement OcticArrangement::transformed(const ProjectiveChange& change) const {
  std::vector<LinearForm> forms;
  for (const auto& f : planes_) forms.push_back(change.pull_back(f));
  return with_planes(std::move(forms));
}

OcticArrangement OcticArrangement::reordered(const std::vector<std::size_t>& order) const {
  std::vector<LinearForm> forms;
  for (auto i : order) forms.push_back(planes_.at(i));
  return with_planes(std::move(forms));
}

OcticArrangement OcticArrangement::with_scale(RatFunc scale) const {
  return OcticArrangement(label_, vars_, params_, planes_, std::move(scale));
}

OcticArrangement OcticArrangement::with_planes(std::vector<LinearForm> planes) const {
  return OcticArrangement(label_, vars_, params_, std::move(planes), scale_);
}

void OcticArrangement::validate() const {
  GenericityLog log;
  for (std::size_t i = 0; i < 8; ++i) {
    if (planes_[i].is_zero()) throw InvalidArrangement("plane " + std::to_string(i + 1) + " is zero");
    for (std::size_t j = i + 1; j < 8; ++j) {
      if (!rank_at_least_2(planes_[i].c, planes_[j].c, log)) {
        throw InvalidArrangement("planes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                 " are proportional");
      }
    }
  }
}

std::string OcticArrangement::to_string() const {
  std::ostringstream os;
  os << label_ << ": u^2 = ";
  if (!(scale_ == one_in(ring_))) os << "(" << scale_.to_string() << ")*";
  for (std::size_t i = 0; i < 8; ++i) {
    if (i) os << "*";
    os << "(" << plane_expression(i).to_string() << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------- analysis

IncidenceReport analyze(const OcticArrangement& arr, bool strict) {
  arr.validate();
  GenericityLog log(strict);
  IncidenceReport rep;
  const auto& F = arr.planes();

  std::set<std::vector<std::size_t>> seen_points;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      for (std::size_t k = j + 1; k < 8; ++k) {
        if (!rank_3(F[i].c, F[j].c, F[k].c, log)) continue;
        Vec4 p = kernel3(F[i].c, F[j].c, F[k].c);
        std::vector<std::size_t> through;
        for (std::size_t m = 0; m < 8; ++m) {
          if (m == i || m == j || m == k || !log.nonzero(F[m].eval(p))) through.push_back(m);
        }
        if (!seen_points.insert(through).second) continue;
        rep.points.push_back({normalize_point_coords(std::move(p)), std::move(through)});
      }
    }
  }

  std::set<std::vector<std::size_t>> seen_lines;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j) {
      std::vector<std::size_t> on{i, j};
      for (std::size_t m = 0; m < 8; ++m) {
        if (m == i || m == j) continue;
        if (!rank_3(F[i].c, F[j].c, F[m].c, log)) on.push_back(m);
      }
      std::sort(on.begin(), on.end());
      if (seen_lines.insert(on).second) rep.lines.push_back({std::move(on)});
    }
  }

  auto by_planes = [](const auto& a, const auto& b) { return a.planes < b.planes; };
  std::sort(rep.points.begin(), rep.points.end(), by_planes);
  std::sort(rep.lines.begin(), rep.lines.end(), by_planes);
  rep.admissible = true;
  for (const auto& p : rep.points) {
    if (p.multiplicity() >= 6) rep.admissible = false;
  }
  for (const auto& l : rep.lines) {
    if (l.multiplicity() >= 4) rep.admissible = false;
  }
  rep.conditions = log.conditions();
  return rep;
}

bool lines_skew(const OcticArrangement& arr, const IncidenceLine& a, const IncidenceLine& b,
                GenericityLog* log) {
  const auto [i, j] = a.key();
  const auto [k, l] = b.key();
  std::set<std::size_t> s{i, j, k, l};
  if (s.size() != 4) return false;
  Mat4 m{arr.plane(i).c, arr.plane(j).c, arr.plane(k).c, arr.plane(l).c};
  RatFunc d = det4(m);
  if (log) return log->nonzero(d);
  return !d.is_zero();
}

FibrationSeeds find_fibration_seeds(const OcticArrangement& arr, const IncidenceReport& rep) {
  FibrationSeeds seeds;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto m = rep.points[i].multiplicity();
    if (m == 4 || m == 5) seeds.points.push_back(i);
  }
  for (std::size_t a = 0; a < rep.lines.size(); ++a) {
    if (rep.lines[a].multiplicity() > 3) continue;
    seeds.lines.push_back(a);
    for (std::size_t b = a + 1; b < rep.lines.size(); ++b) {
      if (rep.lines[b].multiplicity() > 3) continue;
      if (lines_skew(arr, rep.lines[a], rep.lines[b])) seeds.skew_pairs.emplace_back(a, b);
    }
  }
  // Disjoint quadruples through two high-multiplicity points.
  auto quads = [](const std::vector<std::size_t>& planes) {
    std::vector<std::array<std::size_t, 4>> out;
    const std::size_t n = planes.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          for (std::size_t d = c + 1; d < n; ++d) out.push_back({planes[a], planes[b], planes[c], planes[d]});
    return out;
  };
  for (std::size_t x = 0; x < seeds.points.size(); ++x) {
    for (std::size_t y = x + 1; y < seeds.points.size(); ++y) {
      const auto& P = rep.points[seeds.points[x]];
      const auto& Q = rep.points[seeds.points[y]];
      for (const auto& q1 : quads(P.planes)) {
        for (const auto& q2 : quads(Q.planes)) {
          bool disjoint = true;
          for (auto u : q1) {
            if (std::find(q2.begin(), q2.end(), u) != q2.end()) disjoint = false;
          }
          if (disjoint) seeds.point_pairs.push_back({seeds.points[x], seeds.points[y], q1, q2});
        }
      }
    }
  }
  return seeds;
}

// ---------------------------------------------------------------- normalization

namespace {

// Columns of M: `fixed` columns are given points; remaining columns are
// filled with standard basis vectors keeping M invertible.
Mat4 complete_basis(const RingPtr& ring, const std::map<int, Vec4>& fixed) {
  std::vector<int> free_cols;
  for (int c = 0; c < 4; ++c) {
    if (!fixed.count(c)) free_cols.push_back(c);
  }
  std::vector<int> basis{0, 1, 2, 3};
  // Try all assignments of distinct basis vectors to the free columns.
  std::vector<int> pick(free_cols.size());
  std::function<std::optional<Mat4>(std::size_t, std::vector<bool>&)> rec;
  rec = [&](std::size_t k, std::vector<bool>& used) -> std::optional<Mat4> {
    if (k == free_cols.size()) {
      Mat4 m;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m[r][c] = zero_in(ring);
      }
      for (const auto& [c, v] : fixed) {
        for (int r = 0; r < 4; ++r) m[r][c] = v[r];
      }
      for (std::size_t q = 0; q < free_cols.size(); ++q) m[pick[q]][free_cols[q]] = one_in(ring);
      if (det4(m).is_zero()) return std::nullopt;
      return m;
    }
    for (int b = 0; b < 4; ++b) {
      if (used[b]) continue;
      used[b] = true;
      pick[k] = b;
      if (auto m = rec(k + 1, used)) return m;
      used[b] = false;
    }
    return std::nullopt;
  };
  std::vector<bool> used(4, false);
  auto m = rec(0, used);
  if (!m) throw DegenerateInput("cannot complete the given points to a projective frame");
  return *m;
}

std::vector<std::size_t> through_first(const std::vector<std::size_t>& first) {
  std::vector<std::size_t> order = first;
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < 8; ++i) {
    if (std::find(first.begin(), first.end(), i) == first.end()) order.push_back(i);
  }
  return order;
}

}  // namespace

Normalized normalize_point(const OcticArrangement& arr, const IncidencePoint& point) {
  const auto m = point.multiplicity();
  if (m != 4 && m != 5) throw BadSeed("normalize_point needs a fourfold or fivefold point");
  ProjectiveChange change(complete_basis(arr.ring(), {{3, point.coords}}));
  auto order = through_first(point.planes);
  OcticArrangement moved = arr.transformed(change).reordered(order);
  std::vector<LinearForm> forms = moved.planes();
  RatFunc scale = moved.scale();
  for (std::size_t k = m; k < 8; ++k) {
    RatFunc g = forms[k].c[3];
    if (g.is_zero()) throw NotNormalized("plane off the point has zero t-coefficient");
    forms[k] = scaled(forms[k], g.inverse());
    scale = scale * g;
  }
  return {moved.with_planes(std::move(forms)).with_scale(scale), change, order};
}

Normalized normalize_point_pair(const OcticArrangement& arr, const IncidencePoint& q1,
                                const IncidencePoint& q2, const std::array<std::size_t, 4>& quad1,
                                const std::array<std::size_t, 4>& quad2) {
  for (auto i : quad1) {
    if (std::find(q1.planes.begin(), q1.planes.end(), i) == q1.planes.end()) {
      throw BadSeed("first quadruple does not pass through the first point");
    }
  }
  for (auto i : quad2) {
    if (std::find(q2.planes.begin(), q2.planes.end(), i) == q2.planes.end()) {
      throw BadSeed("second quadruple does not pass through the second point");
    }
  }
  ProjectiveChange change(complete_basis(arr.ring(), {{3, q1.coords}, {0, q2.coords}}));
  std::vector<std::size_t> order(quad1.begin(), quad1.end());
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> second(quad2.begin(), quad2.end());
  std::sort(second.begin(), second.end());
  order.insert(order.end(), second.begin(), second.end());
  std::set<std::size_t> all(order.begin(), order.end());
  if (all.size() != 8) throw BadSeed("quadruples must partition the eight planes");
  return {arr.transformed(change).reordered(order), change, order};
}

Normalized normalize_skew_lines(const OcticArrangement& arr, const std::array<std::size_t, 4>& seed,
                                const std::optional<std::array<RatFunc, 4>>& scales) {
  std::set<std::size_t> distinct(seed.begin(), seed.end());
  if (distinct.size() != 4 || *distinct.rbegin() >= 8) throw NotSkew("seed needs four distinct planes");
  // Rows of N are the new coordinates in terms of the old: x' = N x.
  Mat4 N;
  for (int r = 0; r < 4; ++r) {
    RatFunc s = scales ? (*scales)[r].in_ring(arr.ring()) : one_in(arr.ring());
    if (s.is_zero()) throw DegenerateInput("zero seed scale");
    for (int c = 0; c < 4; ++c) N[r][c] = arr.plane(seed[r]).c[c] / s;
  }
  auto M = invert(N);
  if (!M) throw NotSkew("the two lines meet: the four planes are dependent");
  ProjectiveChange change(*M);
  std::vector<std::size_t> order(seed.begin(), seed.end());
  for (std::size_t i = 0; i < 8; ++i) {
    if (!distinct.count(i)) order.push_back(i);
  }
  return {arr.transformed(change).reordered(order), change, order};
}

}  // namespace dofib
