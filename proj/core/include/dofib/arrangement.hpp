#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dofib/ratfunc.hpp"

namespace dofib {

/// Homogeneous linear form c0*x + c1*y + c2*z + c3*t with coefficients in
/// the parameter field.
struct LinearForm {
  std::array<RatFunc, 4> c;

  bool is_zero() const;
  RatFunc eval(const std::array<RatFunc, 4>& point) const;
  /// The form as a rational function in `coords` (coefficients may involve
  /// parameters of the same ring).
  RatFunc expression(const RingPtr& ring, const std::array<std::string, 4>& coords) const;
  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.c == b.c; }
};

/// x = M x' (old coordinates in terms of new ones). Forms pull back as
/// F'(x') = F(M x'), points push forward as x' = M^{-1} x.
class ProjectiveChange {
 public:
  explicit ProjectiveChange(std::array<std::array<RatFunc, 4>, 4> matrix);
  static ProjectiveChange identity(const RingPtr& ring);

  const std::array<std::array<RatFunc, 4>, 4>& matrix() const noexcept { return m_; }
  const std::array<std::array<RatFunc, 4>, 4>& inverse() const noexcept { return inv_; }
  LinearForm pull_back(const LinearForm& f) const;
  /// Undo pull_back.
  LinearForm push_forward(const LinearForm& f) const;
  std::array<RatFunc, 4> map_point(const std::array<RatFunc, 4>& p) const;
  bool is_identity() const;

 private:
  std::array<std::array<RatFunc, 4>, 4> m_;
  std::array<std::array<RatFunc, 4>, 4> inv_;
};

/// Eight planes in P^3. The branch polynomial is scale * F_1 ... F_8; scale
/// is a nonzero constant of the parameter field and records rescalings made
/// while normalizing.
class OcticArrangement {
 public:
  OcticArrangement(std::string label, std::array<std::string, 4> vars, std::vector<std::string> params,
                   std::vector<LinearForm> planes, std::optional<RatFunc> scale = std::nullopt);

  /// Parses eight plane expressions over vars + params.
  static OcticArrangement from_expressions(std::string label, std::array<std::string, 4> vars,
                                           std::vector<std::string> params,
                                           const std::vector<std::string>& planes);

  const std::string& label() const noexcept { return label_; }
  const std::array<std::string, 4>& vars() const noexcept { return vars_; }
  const std::vector<std::string>& params() const noexcept { return params_; }
  const RingPtr& ring() const noexcept { return ring_; }
  const std::vector<LinearForm>& planes() const noexcept { return planes_; }
  const LinearForm& plane(std::size_t i) const { return planes_.at(i); }
  const RatFunc& scale() const noexcept { return scale_; }

  RatFunc plane_expression(std::size_t i) const;
  /// scale * product of the plane expressions.
  RatFunc octic() const;

  /// Substitutes exact rationals for parameters; specialized parameters are
  /// dropped from the parameter list.
  OcticArrangement specialize(const std::map<std::string, BigRat>& values) const;
  OcticArrangement transformed(const ProjectiveChange& change) const;
  /// planes'[k] = planes[order[k]].
  OcticArrangement reordered(const std::vector<std::size_t>& order) const;
  OcticArrangement with_scale(RatFunc scale) const;
  OcticArrangement with_planes(std::vector<LinearForm> planes) const;

  /// Throws InvalidArrangement if two planes are proportional or a plane is 0.
  void validate() const;

  std::string to_string() const;

 private:
  std::string label_;
  std::array<std::string, 4> vars_;
  std::vector<std::string> params_;
  RingPtr ring_;
  std::vector<LinearForm> planes_;
  RatFunc scale_;
};

/// Collects the polynomials whose non-vanishing a generic rank decision
/// relied on.
class GenericityLog {
 public:
  explicit GenericityLog(bool strict = false) : strict_(strict) {}
  /// Records `value` as decided nonzero; returns !value.is_zero().
  bool nonzero(const RatFunc& value);
  const std::vector<Poly>& conditions() const noexcept { return conditions_; }

 private:
  bool strict_;
  std::vector<Poly> conditions_;
};

struct IncidencePoint {
  std::array<RatFunc, 4> coords;
  std::vector<std::size_t> planes;  // sorted indices of the planes through it
  std::size_t multiplicity() const { return planes.size(); }
};

struct IncidenceLine {
  std::vector<std::size_t> planes;  // sorted; the first two span the line
  std::size_t multiplicity() const { return planes.size(); }
  std::pair<std::size_t, std::size_t> key() const { return {planes[0], planes[1]}; }
};

struct IncidenceReport {
  std::vector<IncidencePoint> points;  // multiplicity >= 3
  std::vector<IncidenceLine> lines;    // multiplicity >= 2
  bool admissible = false;
  std::vector<Poly> conditions;        // genericity assumptions used
};

/// Points of multiplicity >= 3 and lines of multiplicity >= 2, decided by
/// exact rank computations over the parameter field. With strict = true a
/// decision depending on a nonconstant polynomial throws ParameterDegeneracy.
IncidenceReport analyze(const OcticArrangement& arr, bool strict = false);

/// Whether lines with the given spanning planes are skew.
bool lines_skew(const OcticArrangement& arr, const IncidenceLine& a, const IncidenceLine& b,
                GenericityLog* log = nullptr);

struct FibrationSeeds {
  std::vector<std::size_t> points;                           // indices into report.points, mult 4 or 5
  std::vector<std::pair<std::size_t, std::size_t>> skew_pairs;  // indices into report.lines
  struct PointPair {
    std::size_t first, second;                             // indices into report.points
    std::array<std::size_t, 4> quad1, quad2;               // disjoint plane quadruples
  };
  std::vector<PointPair> point_pairs;
  std::vector<std::size_t> lines;                            // all double/triple lines
};

FibrationSeeds find_fibration_seeds(const OcticArrangement& arr, const IncidenceReport& rep);

struct Normalized {
  OcticArrangement arrangement;
  ProjectiveChange change;
  std::vector<std::size_t> order;  // new plane k was old plane order[k]
};

/// Moves the point to (0:0:0:1), lists the planes through it first, and
/// rescales the remaining planes so their t-coefficient is 1 (the factors
/// go into the arrangement scale).
Normalized normalize_point(const OcticArrangement& arr, const IncidencePoint& point);

/// Moves q1 to (0:0:0:1) and q2 to (1:0:0:0); the planes of quad1 come
/// first (and omit t), then those of quad2 (which omit x).
Normalized normalize_point_pair(const OcticArrangement& arr, const IncidencePoint& q1,
                                const IncidencePoint& q2, const std::array<std::size_t, 4>& quad1,
                                const std::array<std::size_t, 4>& quad2);

/// New coordinates (x, y, z, t) = (F_i/s_0, F_j/s_1, F_k/s_2, F_l/s_3) for
/// seed = (i, j, k, l); the lines {F_i = F_j = 0} and {F_k = F_l = 0} become
/// x = y = 0 and z = t = 0. Throws NotSkew if the four forms are dependent.
Normalized normalize_skew_lines(const OcticArrangement& arr, const std::array<std::size_t, 4>& seed,
                                const std::optional<std::array<RatFunc, 4>>& scales = std::nullopt);

}  // namespace dofib
