#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dofib/arrangement.hpp"
#include "dofib/mobius.hpp"
#include "dofib/sqrt_scalar.hpp"

namespace dofib {

/// Cooperative cancellation flag checked between expensive steps.
class CancelToken {
 public:
  void cancel() noexcept { flag_.store(true, std::memory_order_relaxed); }
  bool cancelled() const noexcept { return flag_.load(std::memory_order_relaxed); }
  void check() const;  // throws Cancelled

 private:
  std::atomic<bool> flag_{false};
};

/// A rational map of double covers u_target = multiplier * u_source.
/// Components are keyed by target coordinate or parameter name and written
/// in the source variables.
struct DoubleCoverMap {
  std::vector<std::string> source_coords, source_params;
  std::vector<std::string> target_coords, target_params;
  std::map<std::string, RatFunc> components;
  std::optional<SqrtScalar> multiplier;  // derived by verify() when absent

  RingPtr source_ring() const;
  const RatFunc& component(const std::string& target) const;
  /// Identity on the given coordinates and parameters.
  static DoubleCoverMap identity(const std::vector<std::string>& coords, const std::vector<std::string>& params);
  /// Multiplies every coordinate component by h (the multiplier by h^4).
  DoubleCoverMap rescaled(const RatFunc& h) const;
};

enum class CertStatus { Verified, TwistMismatch, Failed };
std::string to_string(CertStatus s);

struct Certification {
  CertStatus status = CertStatus::Failed;
  RatFunc ratio;          // target branch o phi / source branch
  SqrtScalar root;        // sqrt(ratio) normalized
  RatFunc square_factor;  // ratio = square_factor^2 * residual_twist (up to the multiplier)
  RatFunc residual_twist; // square-free, 1 when verified
  bool sign_flipped = false;  // multiplier agrees with -sqrt(ratio)
  std::string note;
  double seconds = 0;
};

/// Checks multiplier^2 * source = target o phi. Branches are given as factor
/// lists so each factor is pulled back separately.
Certification verify(const DoubleCoverMap& phi, const std::vector<RatFunc>& source_factors,
                     const std::vector<RatFunc>& target_factors, const CancelToken* cancel = nullptr);
Certification verify(const DoubleCoverMap& phi, const OcticArrangement& source, const OcticArrangement& target,
                     const CancelToken* cancel = nullptr);

/// The branch of an arrangement as factors (scale first).
std::vector<RatFunc> branch_factors(const OcticArrangement& arr);

/// phi o psi (psi first). Multipliers combine as phi's multiplier pulled
/// back by psi times psi's multiplier.
DoubleCoverMap compose(const DoubleCoverMap& phi, const DoubleCoverMap& psi, const CancelToken* cancel = nullptr);

/// Rescales the coordinate components to coprime polynomials.
DoubleCoverMap primitive_coordinates(const DoubleCoverMap& m);

/// Coordinate components proportional (all 2x2 minors vanish) and
/// parameter components equal. Returns the factor h with phi = h psi.
std::optional<RatFunc> projectively_equivalent(const DoubleCoverMap& phi, const DoubleCoverMap& psi);

/// Root in `v` of every factor of degree one; constant factors are skipped.
/// Throws NonlinearFactor on a factor of higher degree in `v`.
std::vector<RatFunc> roots_in(const std::vector<RatFunc>& factors, const std::string& v);

struct QuadrupleMatch {
  std::array<int, 4> permutation;  // qA[i] corresponds to substituted qB[permutation[i]]
  Mobius mobius;                   // sends substituted qB[permutation[i]] to qA[i]
  std::vector<RatFunc> substituted;
  std::size_t candidates = 0;      // permutations with equal cross-ratio
  /// Every (permutation, transform) passing the fourth-point check, the
  /// returned one first. They differ by the Klein four-group.
  std::vector<std::pair<std::array<int, 4>, Mobius>> alternatives;
};

/// Applies `substitution` to qB, then finds a reordering with the cross-ratio
/// of qA and the Möbius transform realizing it. Throws NoMatch.
QuadrupleMatch match_quadruples(const std::array<RatFunc, 4>& qA, const std::array<RatFunc, 4>& qB,
                                const std::map<std::string, RatFunc>& substitution);

}  // namespace dofib
