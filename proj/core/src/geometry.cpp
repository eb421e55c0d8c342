#include "panto/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "panto/errors.hpp"

namespace panto {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMetreToMm = 1000.0;

}  // namespace

PolarUnitGeometry polar_unit_parameters(double inner_radius_m, double width_m,
                                        double total_angle_deg, double unit_angle_deg) {
  if (!(inner_radius_m > 0.0) || !(width_m > 0.0)) {
    throw ConfigError("polar unit: inner radius and width must be positive");
  }
  if (!(unit_angle_deg > 0.0) || unit_angle_deg >= 180.0 || total_angle_deg > 360.0 ||
      unit_angle_deg > total_angle_deg) {
    throw ConfigError("polar unit: need 0 < unit angle <= total angle <= 360 and unit angle < 180");
  }
  const double ratio = total_angle_deg / unit_angle_deg;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0) {
    throw ConfigError("polar unit: unit angle does not divide the total angle");
  }

  PolarUnitGeometry g;
  g.inner_radius = inner_radius_m;
  g.deployed_width = width_m;
  g.outer_radius = inner_radius_m + width_m;
  g.total_angle = total_angle_deg;
  g.unit_angle = unit_angle_deg;
  g.unit_count = static_cast<int>(rounded);

  const double rb = g.inner_radius;
  const double r = g.outer_radius;
  const double phi = unit_angle_deg * kDegToRad;
  g.bar_length = std::sqrt(rb * rb + r * r - 2.0 * r * rb * std::cos(phi));
  g.semi_bar_1 = g.bar_length * r / (r + rb);
  g.semi_bar_2 = g.bar_length * rb / (r + rb);
  g.arm_ratio = rb / r;

  const double sine = rb / g.semi_bar_2 * std::sin(phi / 2.0);
  if (sine > 1.0) {
    throw ConfigError("polar unit: geometrically impossible (duplet-angle sine exceeds 1)");
  }
  g.duplet_angle = 2.0 * std::asin(sine) / kDegToRad;
  return g;
}

DeployabilityCheck verify_deployability(const std::vector<std::pair<double, double>>& semi_bars) {
  if (semi_bars.empty()) {
    throw ConfigError("deployability: empty unit sequence");
  }
  for (const auto& [a, b] : semi_bars) {
    if (!(a > 0.0) || !(b > 0.0)) {
      throw ConfigError("deployability: semi-bar lengths must be positive");
    }
  }
  const double reference = semi_bars.front().first / semi_bars.front().second;
  DeployabilityCheck check;
  for (const auto& [a, b] : semi_bars) {
    const double deviation = std::abs(a / b - reference) / reference;
    check.max_ratio_deviation = std::max(check.max_ratio_deviation, deviation);
  }
  check.deployable = check.max_ratio_deviation <= 1e-9;
  return check;
}

ArchCablePattern arch_cable_pattern_from_string(const std::string& name) {
  if (name == "chords") return ArchCablePattern::Chords;
  if (name == "inner") return ArchCablePattern::InnerChord;
  if (name == "outer") return ArchCablePattern::OuterChord;
  throw ConfigError("unknown cable pattern '" + name + "' (expected chords, inner or outer)");
}

const char* to_string(ArchCablePattern pattern) {
  switch (pattern) {
    case ArchCablePattern::Chords:
      return "chords";
    case ArchCablePattern::InnerChord:
      return "inner";
    case ArchCablePattern::OuterChord:
      return "outer";
  }
  return "?";
}

Model build_polar_arch(const PolarUnitGeometry& geom,
                       const std::vector<Section>& sections,
                       const std::vector<Material>& materials,
                       const ArchComponents& components,
                       ArchCablePattern pattern) {
  const int n = geom.unit_count;
  if (n < 1) {
    throw ConfigError("polar arch: need at least one unit");
  }

  Model model;
  model.planar = true;
  model.sections = sections;
  model.materials = materials;

  // The arch is symmetric about the mid-angle; start the sweep so that
  // the bisector is the +y axis and the springings sit level.
  const double start = 90.0 - geom.total_angle / 2.0;
  const auto ring_node = [&](double radius_m, int station) {
    const double angle = (start + geom.unit_angle * station) * kDegToRad;
    return Vec3(radius_m * kMetreToMm * std::cos(angle),
                radius_m * kMetreToMm * std::sin(angle), 0.0);
  };

  const int inner_base = 1;             // ids 1 .. n+1
  const int outer_base = n + 2;         // ids n+2 .. 2n+2
  const int pivot_base = 2 * n + 3;     // ids 2n+3 .. 3n+2
  for (int s = 0; s <= n; ++s) {
    model.nodes.push_back({inner_base + s, ring_node(geom.inner_radius, s)});
  }
  for (int s = 0; s <= n; ++s) {
    model.nodes.push_back({outer_base + s, ring_node(geom.outer_radius, s)});
  }
  for (int u = 0; u < n; ++u) {
    // Pivot = inner hinge of the unit plus l2 along the rising chord.
    const Vec3 a = ring_node(geom.inner_radius, u);
    const Vec3 b = ring_node(geom.outer_radius, u + 1);
    const Vec3 pivot = a + (b - a) * (geom.semi_bar_2 / geom.bar_length);
    model.nodes.push_back({pivot_base + u, pivot});
  }

  int member_id = 0;
  const auto add_cable = [&](int na, int nb) {
    model.members.push_back({++member_id, MemberKind::Cable, {na, nb},
                             components.cable_section, components.material});
  };
  if (pattern == ArchCablePattern::Chords || pattern == ArchCablePattern::InnerChord) {
    for (int s = 0; s < n; ++s) add_cable(inner_base + s, inner_base + s + 1);
  }
  if (pattern == ArchCablePattern::Chords || pattern == ArchCablePattern::OuterChord) {
    for (int s = 0; s < n; ++s) add_cable(outer_base + s, outer_base + s + 1);
  }
  for (int u = 0; u < n; ++u) {
    // Rising chord inner_u -> outer_{u+1} and falling chord
    // outer_u -> inner_{u+1}, crossing at the shared pivot.
    model.members.push_back({++member_id, MemberKind::Uniplet,
                             {inner_base + u, pivot_base + u, outer_base + u + 1},
                             components.uniplet_section, components.material});
    model.members.push_back({++member_id, MemberKind::Uniplet,
                             {outer_base + u, pivot_base + u, inner_base + u + 1},
                             components.uniplet_section, components.material});
  }

  model.supports.push_back({inner_base, true, true, false});
  model.supports.push_back({outer_base, true, true, false});
  model.supports.push_back({inner_base + n, true, true, false});
  model.supports.push_back({outer_base + n, true, true, false});

  return model;
}

ConnectorPattern connector_pattern_from_string(const std::string& name) {
  if (name == "scissors") return ConnectorPattern::Scissors;
  if (name == "cables") return ConnectorPattern::CablesOnly;
  throw ConfigError("unknown connector pattern '" + name + "' (expected scissors or cables)");
}

const char* to_string(ConnectorPattern pattern) {
  switch (pattern) {
    case ConnectorPattern::Scissors:
      return "scissors";
    case ConnectorPattern::CablesOnly:
      return "cables";
  }
  return "?";
}

Model extrude_to_3d(const Model& arch, double spacing_m, ConnectorPattern pattern) {
  if (!arch.planar) {
    throw ConfigError("extrude: input model must be planar");
  }
  if (!(spacing_m > 0.0)) {
    throw ConfigError("extrude: spacing must be positive (coincident copies otherwise)");
  }
  const double spacing = spacing_m * kMetreToMm;

  Model model;
  model.planar = false;
  model.sections = arch.sections;
  model.materials = arch.materials;

  int max_node_id = 0;
  for (const auto& n : arch.nodes) max_node_id = std::max(max_node_id, n.id);
  const int node_offset = max_node_id;

  for (const auto& n : arch.nodes) {
    model.nodes.push_back(n);
  }
  for (const auto& n : arch.nodes) {
    Node copy = n;
    copy.id += node_offset;
    copy.position.z() += spacing;
    model.nodes.push_back(copy);
  }

  // Members: cables A, cables B, uniplets A, uniplets B, then connectors.
  int member_id = 0;
  const auto append_members = [&](MemberKind kind, int offset) {
    for (const auto& m : arch.members) {
      if (m.kind != kind) continue;
      Member copy = m;
      copy.id = ++member_id;
      for (auto& nid : copy.nodes) nid += offset;
      model.members.push_back(copy);
    }
  };
  append_members(MemberKind::Cable, 0);
  append_members(MemberKind::Cable, node_offset);
  append_members(MemberKind::Bar, 0);
  append_members(MemberKind::Bar, node_offset);
  append_members(MemberKind::Uniplet, 0);
  append_members(MemberKind::Uniplet, node_offset);

  // Hinge stations: nodes that belong to some two-node member or are
  // uniplet ends (pivots only ever appear as the middle node).
  std::vector<int> hinge_ids;
  {
    std::vector<bool> is_pivot(arch.nodes.size(), false);
    for (const auto& m : arch.members) {
      if (m.kind == MemberKind::Uniplet) {
        is_pivot[arch.node_index(m.nodes[1])] = true;
      }
    }
    for (std::size_t i = 0; i < arch.nodes.size(); ++i) {
      if (!is_pivot[i]) hinge_ids.push_back(arch.nodes[i].id);
    }
  }

  // Connector section/material follow the arch's own cable and uniplet
  // members (first of each kind).
  int cable_section = 0, cable_material = 0, uniplet_section = 0, uniplet_material = 0;
  for (const auto& m : arch.members) {
    if (m.kind == MemberKind::Cable && cable_section == 0) {
      cable_section = m.section;
      cable_material = m.material;
    }
    if (m.kind == MemberKind::Uniplet && uniplet_section == 0) {
      uniplet_section = m.section;
      uniplet_material = m.material;
    }
  }
  if (cable_section == 0) cable_section = uniplet_section;
  if (uniplet_section == 0) uniplet_section = cable_section;
  if (cable_material == 0) cable_material = uniplet_material;
  if (uniplet_material == 0) uniplet_material = cable_material;

  // Stations pair an inner and an outer hinge sharing a radial line; a
  // transverse scissor crosses between the two copies inside that
  // radial-transverse plane.
  struct Station {
    int inner_id;
    int outer_id;
  };
  std::vector<Station> stations;
  {
    std::vector<int> sorted = hinge_ids;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      const Vec3 pa = arch.node(a).position;
      const Vec3 pb = arch.node(b).position;
      const double ang_a = std::atan2(pa.y(), pa.x());
      const double ang_b = std::atan2(pb.y(), pb.x());
      if (std::abs(ang_a - ang_b) > 1e-9) return ang_a < ang_b;
      return pa.norm() < pb.norm();
    });
    for (std::size_t i = 0; i + 1 < sorted.size(); i += 2) {
      stations.push_back({sorted[i], sorted[i + 1]});
    }
  }

  int next_node_id = 2 * node_offset;
  std::vector<Member> transverse_uniplets;
  std::vector<Member> transverse_cables;
  for (const auto& st : stations) {
    const Vec3 inner_a = arch.node(st.inner_id).position;
    const Vec3 outer_a = arch.node(st.outer_id).position;
    if (pattern == ConnectorPattern::Scissors) {
      // Crossing diagonals of the (radial x transverse) rectangle share
      // the rectangle centre as pivot.
      Vec3 centre = 0.5 * (inner_a + outer_a);
      centre.z() += 0.5 * spacing;
      const int pivot_id = ++next_node_id;
      model.nodes.push_back({pivot_id, centre});
      transverse_uniplets.push_back({0, MemberKind::Uniplet,
                                     {st.outer_id, pivot_id, st.inner_id + node_offset},
                                     uniplet_section, uniplet_material});
      transverse_uniplets.push_back({0, MemberKind::Uniplet,
                                     {st.outer_id + node_offset, pivot_id, st.inner_id},
                                     uniplet_section, uniplet_material});
    }
    transverse_cables.push_back({0, MemberKind::Cable,
                                 {st.inner_id, st.inner_id + node_offset},
                                 cable_section, cable_material});
    transverse_cables.push_back({0, MemberKind::Cable,
                                 {st.outer_id, st.outer_id + node_offset},
                                 cable_section, cable_material});
  }
  for (auto& m : transverse_uniplets) {
    m.id = ++member_id;
    model.members.push_back(m);
  }
  for (auto& m : transverse_cables) {
    m.id = ++member_id;
    model.members.push_back(m);
  }

  for (const auto& s : arch.supports) {
    Support a = s;
    a.fix_z = true;  // planar z fixing becomes explicit in 3D
    model.supports.push_back(a);
    Support b = a;
    b.node += node_offset;
    model.supports.push_back(b);
  }

  for (const auto& l : arch.loads) {
    model.loads.push_back(l);
    PointLoad copy = l;
    copy.node += node_offset;
    model.loads.push_back(copy);
  }

  return model;
}

}  // namespace panto
