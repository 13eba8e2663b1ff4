#pragma once

#include <array>
#include <string>
#include <vector>

#include "dofib/arrangement.hpp"

namespace dofib {

struct WeierstrassInvariants {
  RatFunc c4, c6, disc, J;
  RatFunc j() const;  // classical j = 1728 J
};

/// u^2 = t^3 + f6 t^2 + f12 t + f18 over a base with coordinates `base`.
struct WeierstrassModel {
  std::vector<std::string> base;
  RatFunc f6, f12, f18;

  /// c4 = b2^2 - 24 b4, c6 = -b2^3 + 36 b2 b4 - 216 b6 with b2 = 4 f6,
  /// b4 = 2 f12, b6 = 4 f18; disc = (c4^3 - c6^2)/1728, J = c4^3/(1728 disc).
  /// Throws SingularModel if the discriminant vanishes identically.
  WeierstrassInvariants invariants() const;
  /// The cubic in `fiber` as a rational function.
  RatFunc cubic(const std::string& fiber) const;
};

/// u^2 = (t + r1)(t + r2)(t + r3).
WeierstrassModel model_from_roots(const std::array<RatFunc, 3>& r, std::vector<std::string> base);

/// Model of u^2 = d * (cubic): (f6, f12, f18) -> (d f6, d^2 f12, d^3 f18).
WeierstrassModel quadratic_twist(const WeierstrassModel& m, const RatFunc& d);

/// Model of a genus-one curve u^2 = mult * prod (t + r_i).
struct GenusOneQuartic {
  std::array<RatFunc, 4> roots;
  RatFunc multiplier;
};

struct QuarticToCubic {
  std::array<RatFunc, 3> cubic_roots;  // cubic is prod (T + cubic_roots[i])
  WeierstrassModel model;              // twisted by the quartic's multiplier
  RatFunc new_t;                       // T = K / (t + d)
  RatFunc new_u;                       // U = K u / (t + d)^2
};

/// Sends the root with index `moved` (default: the last) to infinity:
/// u^2 = (T + (b-d)(c-d)) (T + (a-d)(c-d)) (T + (a-d)(b-d)) with
/// K = (a-d)(b-d)(c-d). `t`, `u` name the curve coordinates in `ring`.
QuarticToCubic quartic_to_cubic(const GenusOneQuartic& q, const RingPtr& ring, const std::string& t,
                                const std::string& u, std::size_t moved = 3);

/// Fivefold-point model: planes 1-5 free of t, planes 6-8 of the form F_i + t.
WeierstrassModel from_fivefold(const OcticArrangement& normalized);
/// Fourfold-point model: planes 1-4 free of t, planes 5-8 of the form F_i + t.
WeierstrassModel from_fourfold(const OcticArrangement& normalized);
/// Same constructions from given forms (entries may be indeterminates).
WeierstrassModel fivefold_model(const std::array<RatFunc, 5>& P, const std::array<RatFunc, 3>& F,
                                std::vector<std::string> base);
WeierstrassModel fourfold_model(const std::array<RatFunc, 4>& P, const std::array<RatFunc, 4>& F,
                                std::vector<std::string> base);

/// Skew-line model over the base (alpha, beta, gamma); first four planes must
/// be multiples of x, y, z, t.
WeierstrassModel from_skew_lines(const OcticArrangement& normalized,
                                 const std::array<std::string, 3>& base = {"alpha", "beta", "gamma"});
/// u^2 = t (t - [68][57]) (t - [67][58]) with [ij] = F_i G_j - F_j G_i;
/// index 0 of F and G corresponds to plane 5.
WeierstrassModel skew_model(const std::array<RatFunc, 4>& F, const std::array<RatFunc, 4>& G,
                            std::vector<std::string> base);

struct KodairaFiber {
  Poly line;
  std::string type;  // "I0" (smooth), "In", "In*", "II", "III", "IV", "IV*", "III*", "II*"
  int v_c4 = 0, v_c6 = 0, v_disc = 0;  // after minimal reduction; -1 means infinite
};

/// Valuations of c4, c6, disc along the line and the Kodaira type from the
/// characteristic-zero table. The line must be linear in the base variables;
/// with an empty base, in every variable.
KodairaFiber kodaira_along(const WeierstrassModel& m, const Poly& line);
KodairaFiber kodaira_along(const WeierstrassInvariants& inv, const Poly& line,
                           const std::vector<std::string>& base = {});

/// Order of vanishing of a rational function along an irreducible polynomial.
int valuation(const RatFunc& f, const Poly& prime);

}  // namespace dofib
