#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dofib/arrangement.hpp"

namespace dofib {

struct KummerFibration {
  RatFunc s1_branch;  // scale * F1 ... F4, free of t
  RatFunc s2_branch;  // F5 ... F8, free of x
  std::string pencil;      // base line of the common pencil
  std::string quotient;    // (S1 x_P1 S2)/(i1 x i2)
};

/// Planes 1-4 must omit t and planes 5-8 must omit x.
KummerFibration kummer(const OcticArrangement& normalized);

struct SexticFamily {
  OcticArrangement normalized;         // the line is z = t = 0; planes 7, 8 are z, t
  std::string parameter = "s";
  std::vector<RatFunc> lines{};          // F_k(x, y, z, s z), k = 1..6
  RatFunc fiber_branch{};                // product of `lines`
  RatFunc fiber_at_infinity{};           // F_1(x, y, 0, t) ... F_6(x, y, 0, t)
};

/// K3 fibration by the planes through the line P_i n P_j.
SexticFamily sextic_family(const OcticArrangement& arr, std::size_t i, std::size_t j);

struct SpecialFiber {
  std::string kind;                    // "coincident" or "concurrent"
  std::vector<std::size_t> lines;      // indices into SexticFamily::lines
  Poly condition;                      // polynomial in s (and parameters)
  std::vector<BigRat> rational_roots;  // when the condition is free of parameters
};

std::vector<SpecialFiber> sextic_special_fibers(const SexticFamily& f);

struct QuadricFamily {
  OcticArrangement normalized;         // first four planes x, y, z, t (up to the seed scales)
  std::array<std::size_t, 4> seed;
  ProjectiveChange change;             // original coordinates = change applied to (x, y, z, t)
  std::vector<RatFunc> factors{};        // constant * l, then F_5..F_8 pulled back
  RatFunc branch{};                      // product of `factors`
  RingPtr ring{};                        // p0, p1, q0, q1, l, parameters
};

/// x = p0 q0, y = p0 q1, z = p1 q0, t = l p1 q1 in coordinates where the seed
/// planes are (x, y, z, t); the square (p0 p1 q0 q1)^2 is removed.
QuadricFamily quadric_family(const OcticArrangement& arr, const std::array<std::size_t, 4>& seed,
                             const std::optional<std::array<RatFunc, 4>>& scales = std::nullopt);

/// Which pair of coordinates vanishes at the node.
enum class NodeChart { P0Q1, P1Q0 };

struct NodeEllipticFibration {
  NodeChart chart;
  std::array<std::string, 2> fiber{};  // coordinates left on the fiber
  std::vector<RatFunc> factors{};      // product is `model`
  RatFunc model{};                     // w^2 = model
  RatFunc square{};                    // substituted branch = square^2 * model
};

/// Pencil p0 q0 t0 = p1 q1 t1 (chart P0Q1: q0 = p1 t1, q1 = p0 t0) or
/// p1 q1 t1 = p0 q0 t0 (chart P1Q0: p0 = q1 t1, p1 = q0 t0).
NodeEllipticFibration node_elliptic(const QuadricFamily& f, NodeChart chart);

struct CensusEntry {
  std::array<std::size_t, 4> seed;  // (a, c, d, b) for the pencil F_a F_b = l F_c F_d
  RatFunc branch{};
};

struct Census {
  std::vector<CensusEntry> entries;
  std::size_t skew_line_pairs = 0;
  std::vector<Poly> conditions;
};

/// One quadric fibration per pencil F_a F_b - l F_c F_d with the four planes
/// independent. With build = false the branches are left empty.
Census fibration_census(const OcticArrangement& arr, bool build = true);

}  // namespace dofib
