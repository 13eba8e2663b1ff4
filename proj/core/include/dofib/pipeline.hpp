#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dofib/bimap.hpp"
#include "dofib/k3fib.hpp"

namespace dofib {

/// Double quadric family to the double octic: (p, q, l) to the point
/// (p0 q0, p0 q1, p1 q0, l p1 q1) in seed coordinates. No multiplier.
DoubleCoverMap quadric_parametrization(const OcticArrangement& arr, const QuadricFamily& f);
/// Inverse of quadric_parametrization: p = (x', z'), q = (x', y'), l = x' t' / (y' z').
DoubleCoverMap quadric_inverse(const OcticArrangement& arr, const QuadricFamily& f);

/// Node pencil coordinates to the double quadric family (the chart substitution).
DoubleCoverMap node_to_quadric(const QuadricFamily& f, NodeChart chart);
/// Double quadric family to node pencil coordinates.
DoubleCoverMap quadric_to_node(const QuadricFamily& f, NodeChart chart);

/// Sets the multiplier to the square root of the pullback ratio. Throws
/// NotDominant, or DegenerateInput when the ratio is not a square up to a
/// factor free of the source coordinates.
DoubleCoverMap with_derived_multiplier(DoubleCoverMap m, const std::vector<RatFunc>& source_factors,
                                       const std::vector<RatFunc>& target_factors);

/// The human-supplied part of the construction.
struct BridgeConfig {
  std::array<std::size_t, 4> x_seed{}, y_seed{};
  std::optional<std::array<std::string, 4>> x_scales, y_scales;
  NodeChart x_chart = NodeChart::P0Q1, y_chart = NodeChart::P1Q0;
  /// Y-side symbol -> expression in X-side symbols.
  std::map<std::string, std::string> substitution;
  std::string fiber = "t0", fiber_other = "t1";
  std::size_t mobius_choice = 0;          // index into QuadrupleMatch::alternatives
  std::optional<std::string> fiber_map;   // overrides the solved fiber component
};

BridgeConfig parse_bridge(std::string_view json_text);

struct PipelineResult {
  QuadricFamily x_family, y_family;
  NodeEllipticFibration x_node, y_node;
  std::array<RatFunc, 4> x_roots, y_roots;  // roots in the fiber coordinate
  RatFunc x_cross_ratio, y_cross_ratio;
  QuadrupleMatch match;
  RatFunc fiber_map;                         // image of the fiber coordinate (the other one is kept)
  std::vector<std::pair<std::string, DoubleCoverMap>> steps;
  DoubleCoverMap composite;                  // X -> Y
  Certification certification;
};

PipelineResult run_pipeline(const OcticArrangement& x, const OcticArrangement& y, const BridgeConfig& cfg,
                            const CancelToken* cancel = nullptr);

}  // namespace dofib
