#pragma once

#include <string>
#include <vector>

#include "panto/model.hpp"

namespace panto {

/// Parameters of one polar scissor unit. Lengths in metres, angles in
/// degrees at every interface; conversion to mm happens when a Model is
/// built. The arm ratio here is the fixed semi-bar ratio of the unit
/// (distinct from the reciprocal semi-lengths used inside the uniplet
/// stiffness formulas).
struct PolarUnitGeometry {
  double inner_radius = 0.0;    // R_b, m
  double deployed_width = 0.0;  // t, m
  double outer_radius = 0.0;    // R = R_b + t, m
  double total_angle = 0.0;     // alpha, deg
  double unit_angle = 0.0;      // phi, deg
  int unit_count = 0;           // N = alpha / phi
  double bar_length = 0.0;      // L, m (cosine rule)
  double semi_bar_1 = 0.0;      // l1 = L R / (R + R_b), pivot to outer hinge, m
  double semi_bar_2 = 0.0;      // l2 = L R_b / (R + R_b), pivot to inner hinge, m
  double duplet_angle = 0.0;    // beta, deg, scissor opening at the pivot
  double arm_ratio = 0.0;       // l2 / l1 = R_b / R
};

/// Derives every unit parameter from (R_b, t, alpha, phi). phi must divide
/// alpha exactly (1e-9 of a unit) and the unit must be geometrically
/// possible (the duplet-angle asin argument within [-1, 1]).
PolarUnitGeometry polar_unit_parameters(double inner_radius_m, double width_m,
                                        double total_angle_deg, double unit_angle_deg);

/// Constant-ratio check over (a_i, b_i) semi-bar pairs.
struct DeployabilityCheck {
  bool deployable = false;
  double max_ratio_deviation = 0.0;  // relative to the first unit's ratio
};
DeployabilityCheck verify_deployability(const std::vector<std::pair<double, double>>& semi_bars);

/// Cable presets for the 2D arch: cables along adjacent hinge pairs of
/// the inner chord, the outer chord, or both (default).
enum class ArchCablePattern { Chords, InnerChord, OuterChord };
ArchCablePattern arch_cable_pattern_from_string(const std::string& name);
const char* to_string(ArchCablePattern pattern);

/// Section/material ids the builders assign to generated members.
struct ArchComponents {
  int uniplet_section = 1;
  int cable_section = 2;
  int material = 1;
};

/// Builds the deployed 2D arch in the x-y plane (y up, symmetric about
/// the y axis): hinge nodes on the two concentric circles, one pivot per
/// unit, two crossing uniplets per duplet, and discrete cables per the
/// pattern. The four springing hinges are pinned. Sections/materials must
/// already be listed in `sections`/`materials`.
///
/// Node ids: inner hinges 1..N+1, outer hinges N+2..2N+2, pivots
/// 2N+3..3N+2, all counterclockwise from the +x springing. Member ids:
/// cables first (inner chord, then outer), then per unit the two uniplets.
Model build_polar_arch(const PolarUnitGeometry& geom,
                       const std::vector<Section>& sections,
                       const std::vector<Material>& materials,
                       const ArchComponents& components = {},
                       ArchCablePattern pattern = ArchCablePattern::Chords);

/// Transverse connector presets for the 3D extrusion: "scissors" places a
/// crossing duplet plus inner/outer chord cables at every hinge station
/// (adds one pivot node per station); "cables" places the chord cables
/// only and adds no nodes.
enum class ConnectorPattern { Scissors, CablesOnly };
ConnectorPattern connector_pattern_from_string(const std::string& name);
const char* to_string(ConnectorPattern pattern);

/// Duplicates a planar arch at z = spacing and joins the two copies with
/// transverse connectors. Member ids: cables of copy A, cables of copy B,
/// uniplets of A, uniplets of B, transverse uniplets, transverse cables.
Model extrude_to_3d(const Model& arch, double spacing_m,
                    ConnectorPattern pattern = ConnectorPattern::Scissors);

}  // namespace panto
