#include "panto/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "panto/document.hpp"
#include "panto/geometry.hpp"
#include "panto/solver.hpp"

namespace panto {

const char* to_string(MemberKind kind) {
  switch (kind) {
    case MemberKind::Bar:
      return "bar";
    case MemberKind::Cable:
      return "cable";
    case MemberKind::Uniplet:
      return "uniplet";
  }
  return "?";
}

std::string ValidationError::summarize(const std::vector<Violation>& vs) {
  std::ostringstream out;
  out << "model validation failed (" << vs.size() << " violation"
      << (vs.size() == 1 ? "" : "s") << ")";
  for (const auto& v : vs) {
    out << "\n  [" << v.code << "] " << v.message;
  }
  return out.str();
}

namespace {

template <typename T>
int find_by_id(const std::vector<T>& items, int id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

int Model::node_index(int id) const { return find_by_id(nodes, id); }
int Model::section_index(int id) const { return find_by_id(sections, id); }
int Model::material_index(int id) const { return find_by_id(materials, id); }
int Model::member_index(int id) const { return find_by_id(members, id); }

const Node& Model::node(int id) const {
  int i = node_index(id);
  if (i < 0) throw Error("unknown node id " + std::to_string(id));
  return nodes[i];
}
const Section& Model::section(int id) const {
  int i = section_index(id);
  if (i < 0) throw Error("unknown section id " + std::to_string(id));
  return sections[i];
}
const Material& Model::material(int id) const {
  int i = material_index(id);
  if (i < 0) throw Error("unknown material id " + std::to_string(id));
  return materials[i];
}
const Member& Model::member(int id) const {
  int i = member_index(id);
  if (i < 0) throw Error("unknown member id " + std::to_string(id));
  return members[i];
}

double Model::member_length(const Member& m) const {
  return (node(m.nodes.back()).position - node(m.nodes.front()).position).norm();
}

Vec3 Model::member_axis(const Member& m) const {
  return (node(m.nodes.back()).position - node(m.nodes.front()).position).normalized();
}

Model Model::with_member_areas(const std::vector<std::pair<int, double>>& areas_by_member) const {
  Model out = *this;
  // Give every re-sized member a private section so shared sections stay
  // untouched for the others.
  int next_section_id = 0;
  for (const auto& s : out.sections) {
    next_section_id = std::max(next_section_id, s.id);
  }
  for (const auto& [member_id, area] : areas_by_member) {
    int mi = out.member_index(member_id);
    if (mi < 0) throw Error("with_member_areas: unknown member id " + std::to_string(member_id));
    Section s = out.sections[out.section_index(out.members[mi].section)];
    s.id = ++next_section_id;
    s.area = area;
    out.sections.push_back(s);
    out.members[mi].section = s.id;
  }
  return out;
}

namespace {

void check_unique_ids(std::vector<Violation>& out, const char* what,
                      const std::vector<int>& ids) {
  std::unordered_set<int> seen;
  for (int id : ids) {
    if (!seen.insert(id).second) {
      out.push_back({std::string("duplicate-") + what + "-id",
                     std::string(what) + " id " + std::to_string(id) + " appears more than once"});
    }
  }
}

}  // namespace

std::vector<Violation> model_violations(const Model& model) {
  std::vector<Violation> out;

  std::vector<int> ids;
  for (const auto& n : model.nodes) ids.push_back(n.id);
  check_unique_ids(out, "node", ids);
  ids.clear();
  for (const auto& m : model.members) ids.push_back(m.id);
  check_unique_ids(out, "member", ids);
  ids.clear();
  for (const auto& s : model.sections) ids.push_back(s.id);
  check_unique_ids(out, "section", ids);
  ids.clear();
  for (const auto& m : model.materials) ids.push_back(m.id);
  check_unique_ids(out, "material", ids);

  for (const auto& n : model.nodes) {
    if (!n.position.allFinite()) {
      out.push_back({"non-finite-coordinate",
                     "node " + std::to_string(n.id) + " has a non-finite coordinate"});
    }
  }
  for (const auto& s : model.sections) {
    if (!(s.area > 0.0)) {
      out.push_back({"non-positive-area",
                     "section " + std::to_string(s.id) + " has non-positive area"});
    }
    if (s.second_moment_y < 0.0 || s.second_moment_z < 0.0) {
      out.push_back({"negative-second-moment",
                     "section " + std::to_string(s.id) + " has a negative second moment"});
    }
  }
  for (const auto& m : model.materials) {
    if (!(m.elastic_modulus > 0.0) || !(m.unit_weight > 0.0)) {
      out.push_back({"non-positive-material",
                     "material " + std::to_string(m.id) +
                         " must have positive modulus and unit weight"});
    }
  }

  for (const auto& m : model.members) {
    const std::string name = "member " + std::to_string(m.id);
    const std::size_t expected = m.kind == MemberKind::Uniplet ? 3 : 2;
    if (m.nodes.size() != expected) {
      out.push_back({"wrong-node-count",
                     name + " (" + to_string(m.kind) + ") must reference " +
                         std::to_string(expected) + " nodes"});
      continue;
    }
    bool dangling = false;
    for (int nid : m.nodes) {
      if (model.node_index(nid) < 0) {
        out.push_back({"dangling-node-reference",
                       name + " references missing node " + std::to_string(nid)});
        dangling = true;
      }
    }
    if (model.section_index(m.section) < 0) {
      out.push_back({"dangling-section-reference",
                     name + " references missing section " + std::to_string(m.section)});
      dangling = true;
    }
    if (model.material_index(m.material) < 0) {
      out.push_back({"dangling-material-reference",
                     name + " references missing material " + std::to_string(m.material)});
      dangling = true;
    }
    if (dangling) continue;

    const Vec3 a = model.node(m.nodes.front()).position;
    const Vec3 b = model.node(m.nodes.back()).position;
    const double length = (b - a).norm();
    if (!(length > 0.0)) {
      out.push_back({"zero-length-member", name + " has zero length"});
      continue;
    }
    if (m.kind == MemberKind::Uniplet) {
      const Vec3 j = model.node(m.nodes[1]).position;
      const double offset = (j - a).cross(b - a).norm() / length;
      if (offset > kUnipletCollinearityTol * length) {
        out.push_back({"non-collinear-uniplet",
                       name + " pivot lies " + std::to_string(offset) +
                           " mm off the i-k segment"});
      }
      const double t = (j - a).dot(b - a) / (length * length);
      if (t <= 0.0 || t >= 1.0) {
        out.push_back({"pivot-outside-segment",
                       name + " pivot does not lie between the end nodes"});
      }
    }
  }

  for (const auto& s : model.supports) {
    if (model.node_index(s.node) < 0) {
      out.push_back({"dangling-support-reference",
                     "support references missing node " + std::to_string(s.node)});
    }
  }
  for (const auto& l : model.loads) {
    if (model.node_index(l.node) < 0) {
      out.push_back({"dangling-load-reference",
                     "load references missing node " + std::to_string(l.node)});
    }
    if (!l.force.allFinite()) {
      out.push_back({"non-finite-load",
                     "load at node " + std::to_string(l.node) + " is non-finite"});
    }
  }

  return out;
}

DofMap dof_map(const Model& model) {
  DofMap map;
  map.axis_count = model.planar ? 2 : 3;

  const int n = static_cast<int>(model.nodes.size());
  map.index.assign(3 * n, -1);

  std::vector<bool> fixed(3 * n, false);
  for (const auto& s : model.supports) {
    const int ni = model.node_index(s.node);
    if (ni < 0) continue;
    if (s.fix_x) fixed[3 * ni + 0] = true;
    if (s.fix_y) fixed[3 * ni + 1] = true;
    if (s.fix_z) fixed[3 * ni + 2] = true;
  }

  int next_free = 0;
  for (int ni = 0; ni < n; ++ni) {
    for (int axis = 0; axis < map.axis_count; ++axis) {
      if (!fixed[3 * ni + axis]) {
        map.index[3 * ni + axis] = next_free++;
      }
    }
  }
  map.free_count = next_free;

  int next_fixed = next_free;
  for (int ni = 0; ni < n; ++ni) {
    for (int axis = 0; axis < map.axis_count; ++axis) {
      if (fixed[3 * ni + axis]) {
        map.index[3 * ni + axis] = next_fixed++;
      }
    }
  }
  map.total_count = next_fixed;
  return map;
}

namespace {

Model model_from_document(const ModelDocument& doc) {
  Model model;
  model.planar = doc.planar;

  const double to_mm = doc.units.length_to_mm();
  const double to_n = doc.units.force_to_n();

  std::vector<Section> sections = doc.sections;
  std::vector<Material> materials = doc.materials;
  for (auto& m : materials) {
    m.unit_weight *= 1e-9;  // kg/m^3 -> kg/mm^3
  }

  if (doc.generator) {
    const GeneratorBlock& g = *doc.generator;
    const PolarUnitGeometry geom =
        polar_unit_parameters(g.inner_radius, g.width, g.total_angle, g.unit_angle);
    ArchComponents components;
    components.uniplet_section = g.uniplet_section;
    components.cable_section = g.cable_section;
    components.material = g.material;
    model = build_polar_arch(geom, sections, materials, components,
                             arch_cable_pattern_from_string(g.cable_pattern));
    if (g.spacing) {
      model = extrude_to_3d(model, *g.spacing,
                            connector_pattern_from_string(g.connector_pattern));
    }
  } else {
    model.nodes = doc.nodes;
    for (auto& n : model.nodes) {
      n.position *= to_mm;
    }
    model.sections = std::move(sections);
    model.materials = std::move(materials);
    model.members = doc.members;
  }

  for (const auto& s : doc.supports) {
    model.supports.push_back(s);
  }
  for (const auto& l : doc.loads) {
    PointLoad load = l;
    load.force *= to_n;
    model.loads.push_back(load);
  }
  return model;
}

}  // namespace

BuildResult build_model(const ModelDocument& document) {
  BuildResult result;

  if (document.generator && !document.nodes.empty()) {
    result.violations.push_back(
        {"ambiguous-geometry",
         "document declares both an explicit node list and a generator block"});
    return result;
  }

  Model model = model_from_document(document);
  result.violations = model_violations(model);
  if (!result.violations.empty()) {
    return result;
  }

  if (auto unstable = check_stability(model)) {
    const char axis_name[] = {'x', 'y', 'z'};
    result.violations.push_back(
        {"unstable-structure",
         "structure is kinematically unstable with all cables active; near-null DoF at node " +
             std::to_string(unstable->node) + " axis " + axis_name[unstable->axis]});
    return result;
  }

  result.model = std::move(model);
  return result;
}

Model build_model_or_throw(const ModelDocument& document) {
  BuildResult result = build_model(document);
  if (!result.ok()) {
    throw ValidationError(std::move(result.violations));
  }
  return std::move(*result.model);
}

}  // namespace panto
