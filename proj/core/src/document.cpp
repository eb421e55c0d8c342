#include "panto/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace panto {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ParseError(path.empty() ? why : path + ": " + why, -1, path);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + key + "'");
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const char* key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) fail(path, std::string("missing required key '") + key + "'");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vec3 as_vector(const json& j, const std::string& path) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
    fail(path, "expected an array of 2 or 3 numbers");
  }
  Vec3 v = Vec3::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = as_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

UnitsDecl parse_units(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path, {"length", "force"});
  UnitsDecl units;
  if (const json* v = find(j, "length")) {
    const std::string s = as_string(*v, path + ".length");
    if (s == "mm") {
      units.length = LengthUnit::Millimetre;
    } else if (s == "m") {
      units.length = LengthUnit::Metre;
    } else {
      fail(path + ".length", "expected \"mm\" or \"m\"");
    }
  }
  if (const json* v = find(j, "force")) {
    const std::string s = as_string(*v, path + ".force");
    if (s == "N") {
      units.force = ForceUnit::Newton;
    } else if (s == "kN") {
      units.force = ForceUnit::Kilonewton;
    } else {
      fail(path + ".force", "expected \"N\" or \"kN\"");
    }
  }
  return units;
}

MemberKind parse_kind(const json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "bar") return MemberKind::Bar;
  if (s == "cable") return MemberKind::Cable;
  if (s == "uniplet") return MemberKind::Uniplet;
  fail(path, "expected \"bar\", \"cable\" or \"uniplet\"");
}

GeneratorBlock parse_generator(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"type", "inner_radius", "width", "total_angle", "unit_angle",
                       "cable_pattern", "uniplet_section", "cable_section", "material",
                       "spacing", "connector_pattern"});
  if (as_string(require(j, "type", path), path + ".type") != "polar_arch") {
    fail(path + ".type", "the only supported generator is \"polar_arch\"");
  }
  GeneratorBlock g;
  g.inner_radius = as_number(require(j, "inner_radius", path), path + ".inner_radius");
  g.width = as_number(require(j, "width", path), path + ".width");
  g.total_angle = as_number(require(j, "total_angle", path), path + ".total_angle");
  g.unit_angle = as_number(require(j, "unit_angle", path), path + ".unit_angle");
  if (const json* v = find(j, "cable_pattern")) g.cable_pattern = as_string(*v, path + ".cable_pattern");
  if (const json* v = find(j, "uniplet_section")) g.uniplet_section = as_int(*v, path + ".uniplet_section");
  if (const json* v = find(j, "cable_section")) g.cable_section = as_int(*v, path + ".cable_section");
  if (const json* v = find(j, "material")) g.material = as_int(*v, path + ".material");
  if (const json* v = find(j, "spacing")) g.spacing = as_number(*v, path + ".spacing");
  if (const json* v = find(j, "connector_pattern")) {
    g.connector_pattern = as_string(*v, path + ".connector_pattern");
  }
  return g;
}

std::vector<double> parse_bound(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    fail(path, "expected a number or an array of numbers");
  }
  return out;
}

OptimizerBlock parse_optimizer(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown_keys(j, path,
                      {"population", "iterations", "seed", "stress_limit", "deflection_limit",
                       "penalty_exponent", "lower_bound", "upper_bound", "groups", "catalog"});
  OptimizerBlock b;
  b.population = as_int(require(j, "population", path), path + ".population");
  b.iterations = as_int(require(j, "iterations", path), path + ".iterations");
  if (const json* v = find(j, "seed")) {
    if (!v->is_number_unsigned()) fail(path + ".seed", "expected a non-negative integer");
    b.seed = v->get<std::uint64_t>();
  }
  b.stress_limit = as_number(require(j, "stress_limit", path), path + ".stress_limit");
  b.deflection_limit =
      as_number(require(j, "deflection_limit", path), path + ".deflection_limit");
  if (const json* v = find(j, "penalty_exponent")) {
    b.penalty_exponent = as_number(*v, path + ".penalty_exponent");
  }
  b.lower_bound = parse_bound(require(j, "lower_bound", path), path + ".lower_bound");
  b.upper_bound = parse_bound(require(j, "upper_bound", path), path + ".upper_bound");
  if (const json* v = find(j, "groups")) {
    if (!v->is_array()) fail(path + ".groups", "expected an array of member-id arrays");
    for (std::size_t g = 0; g < v->size(); ++g) {
      const json& jg = (*v)[g];
      const std::string gpath = path + ".groups[" + std::to_string(g) + "]";
      if (!jg.is_array() || jg.empty()) fail(gpath, "expected a non-empty array of member ids");
      std::vector<int> ids;
      for (std::size_t i = 0; i < jg.size(); ++i) {
        ids.push_back(as_int(jg[i], gpath + "[" + std::to_string(i) + "]"));
      }
      b.groups.push_back(std::move(ids));
    }
  }
  if (const json* v = find(j, "catalog")) {
    if (!v->is_array()) fail(path + ".catalog", "expected an array of areas");
    for (std::size_t i = 0; i < v->size(); ++i) {
      b.catalog.push_back(as_number((*v)[i], path + ".catalog[" + std::to_string(i) + "]"));
    }
  }
  return b;
}

}  // namespace

ModelDocument parse_model_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Count lines up to the reported byte to give a usable location.
    int line = 1;
    for (std::size_t i = 0; i < std::min(text.size(), static_cast<std::size_t>(e.byte)); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError("syntax error: " + std::string(e.what()), line);
  }

  expect_object(j, "");
  reject_unknown_keys(j, "document",
                      {"schema", "title", "provenance", "units", "planar", "nodes", "sections",
                       "materials", "members", "supports", "loads", "generator", "optimizer"});

  ModelDocument doc;
  doc.schema = as_string(require(j, "schema", "document"), "schema");
  if (doc.schema != "panto-model/1") {
    fail("schema", "unsupported schema '" + doc.schema + "'");
  }
  if (const json* v = find(j, "title")) doc.title = as_string(*v, "title");
  if (const json* v = find(j, "provenance")) {
    if (!v->is_array()) fail("provenance", "expected an array of strings");
    for (std::size_t i = 0; i < v->size(); ++i) {
      doc.provenance.push_back(as_string((*v)[i], "provenance[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = find(j, "units")) doc.units = parse_units(*v, "units");
  if (const json* v = find(j, "planar")) {
    if (!v->is_boolean()) fail("planar", "expected a boolean");
    doc.planar = v->get<bool>();
  }

  if (const json* v = find(j, "nodes")) {
    if (!v->is_array()) fail("nodes", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "nodes[" + std::to_string(i) + "]";
      const json& jn = (*v)[i];
      expect_object(jn, path);
      reject_unknown_keys(jn, path, {"id", "position"});
      Node n;
      n.id = as_int(require(jn, "id", path), path + ".id");
      n.position = as_vector(require(jn, "position", path), path + ".position");
      doc.nodes.push_back(n);
    }
  }

  if (const json* v = find(j, "sections")) {
    if (!v->is_array()) fail("sections", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "sections[" + std::to_string(i) + "]";
      const json& js = (*v)[i];
      expect_object(js, path);
      reject_unknown_keys(js, path, {"id", "area", "second_moment_y", "second_moment_z"});
      Section s;
      s.id = as_int(require(js, "id", path), path + ".id");
      s.area = as_number(require(js, "area", path), path + ".area");
      if (const json* w = find(js, "second_moment_y")) {
        s.second_moment_y = as_number(*w, path + ".second_moment_y");
      }
      if (const json* w = find(js, "second_moment_z")) {
        s.second_moment_z = as_number(*w, path + ".second_moment_z");
      }
      doc.sections.push_back(s);
    }
  }

  if (const json* v = find(j, "materials")) {
    if (!v->is_array()) fail("materials", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "materials[" + std::to_string(i) + "]";
      const json& jm = (*v)[i];
      expect_object(jm, path);
      reject_unknown_keys(jm, path, {"id", "elastic_modulus", "density"});
      Material m;
      m.id = as_int(require(jm, "id", path), path + ".id");
      m.elastic_modulus = as_number(require(jm, "elastic_modulus", path),
                                    path + ".elastic_modulus");
      m.unit_weight = as_number(require(jm, "density", path), path + ".density");
      doc.materials.push_back(m);
    }
  }

  if (const json* v = find(j, "members")) {
    if (!v->is_array()) fail("members", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "members[" + std::to_string(i) + "]";
      const json& jm = (*v)[i];
      expect_object(jm, path);
      reject_unknown_keys(jm, path, {"id", "kind", "nodes", "section", "material"});
      Member m;
      m.id = as_int(require(jm, "id", path), path + ".id");
      m.kind = parse_kind(require(jm, "kind", path), path + ".kind");
      const json& jn = require(jm, "nodes", path);
      if (!jn.is_array()) fail(path + ".nodes", "expected an array of node ids");
      for (std::size_t k = 0; k < jn.size(); ++k) {
        m.nodes.push_back(as_int(jn[k], path + ".nodes[" + std::to_string(k) + "]"));
      }
      m.section = as_int(require(jm, "section", path), path + ".section");
      m.material = as_int(require(jm, "material", path), path + ".material");
      doc.members.push_back(std::move(m));
    }
  }

  if (const json* v = find(j, "supports")) {
    if (!v->is_array()) fail("supports", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "supports[" + std::to_string(i) + "]";
      const json& js = (*v)[i];
      expect_object(js, path);
      reject_unknown_keys(js, path, {"node", "fix"});
      Support s;
      s.node = as_int(require(js, "node", path), path + ".node");
      const json& jf = require(js, "fix", path);
      if (!jf.is_array()) fail(path + ".fix", "expected an array of axis names");
      for (std::size_t k = 0; k < jf.size(); ++k) {
        const std::string axis = as_string(jf[k], path + ".fix[" + std::to_string(k) + "]");
        if (axis == "x") {
          s.fix_x = true;
        } else if (axis == "y") {
          s.fix_y = true;
        } else if (axis == "z") {
          s.fix_z = true;
        } else {
          fail(path + ".fix", "expected \"x\", \"y\" or \"z\"");
        }
      }
      doc.supports.push_back(s);
    }
  }

  if (const json* v = find(j, "loads")) {
    if (!v->is_array()) fail("loads", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "loads[" + std::to_string(i) + "]";
      const json& jl = (*v)[i];
      expect_object(jl, path);
      reject_unknown_keys(jl, path, {"node", "force"});
      PointLoad l;
      l.node = as_int(require(jl, "node", path), path + ".node");
      l.force = as_vector(require(jl, "force", path), path + ".force");
      doc.loads.push_back(l);
    }
  }

  if (const json* v = find(j, "generator")) doc.generator = parse_generator(*v, "generator");
  if (const json* v = find(j, "optimizer")) doc.optimizer = parse_optimizer(*v, "optimizer");
  return doc;
}

ModelDocument load_model_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open model document '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model_document(buffer.str());
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.location());
  }
}

std::string serialize_model_document(const ModelDocument& doc) {
  ordered_json j;
  j["schema"] = doc.schema;
  if (!doc.title.empty()) j["title"] = doc.title;
  if (!doc.provenance.empty()) j["provenance"] = doc.provenance;
  j["units"] = {{"length", doc.units.length == LengthUnit::Metre ? "m" : "mm"},
                {"force", doc.units.force == ForceUnit::Kilonewton ? "kN" : "N"}};
  j["planar"] = doc.planar;

  if (!doc.nodes.empty()) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : doc.nodes) {
      ordered_json jn;
      jn["id"] = n.id;
      jn["position"] = doc.planar ? ordered_json{n.position.x(), n.position.y()}
                                  : ordered_json{n.position.x(), n.position.y(), n.position.z()};
      nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
  }

  if (!doc.sections.empty()) {
    ordered_json sections = ordered_json::array();
    for (const auto& s : doc.sections) {
      ordered_json js;
      js["id"] = s.id;
      js["area"] = s.area;
      if (s.second_moment_y != 0.0) js["second_moment_y"] = s.second_moment_y;
      if (s.second_moment_z != 0.0) js["second_moment_z"] = s.second_moment_z;
      sections.push_back(std::move(js));
    }
    j["sections"] = std::move(sections);
  }

  if (!doc.materials.empty()) {
    ordered_json materials = ordered_json::array();
    for (const auto& m : doc.materials) {
      ordered_json jm;
      jm["id"] = m.id;
      jm["elastic_modulus"] = m.elastic_modulus;
      jm["density"] = m.unit_weight;
      materials.push_back(std::move(jm));
    }
    j["materials"] = std::move(materials);
  }

  if (!doc.members.empty()) {
    ordered_json members = ordered_json::array();
    for (const auto& m : doc.members) {
      ordered_json jm;
      jm["id"] = m.id;
      jm["kind"] = to_string(m.kind);
      jm["nodes"] = m.nodes;
      jm["section"] = m.section;
      jm["material"] = m.material;
      members.push_back(std::move(jm));
    }
    j["members"] = std::move(members);
  }

  if (!doc.supports.empty()) {
    ordered_json supports = ordered_json::array();
    for (const auto& s : doc.supports) {
      ordered_json js;
      js["node"] = s.node;
      ordered_json fix = ordered_json::array();
      if (s.fix_x) fix.push_back("x");
      if (s.fix_y) fix.push_back("y");
      if (s.fix_z) fix.push_back("z");
      js["fix"] = std::move(fix);
      supports.push_back(std::move(js));
    }
    j["supports"] = std::move(supports);
  }

  if (!doc.loads.empty()) {
    ordered_json loads = ordered_json::array();
    for (const auto& l : doc.loads) {
      ordered_json jl;
      jl["node"] = l.node;
      jl["force"] = doc.planar ? ordered_json{l.force.x(), l.force.y()}
                               : ordered_json{l.force.x(), l.force.y(), l.force.z()};
      loads.push_back(std::move(jl));
    }
    j["loads"] = std::move(loads);
  }

  if (doc.generator) {
    const GeneratorBlock& g = *doc.generator;
    ordered_json jg;
    jg["type"] = "polar_arch";
    jg["inner_radius"] = g.inner_radius;
    jg["width"] = g.width;
    jg["total_angle"] = g.total_angle;
    jg["unit_angle"] = g.unit_angle;
    jg["cable_pattern"] = g.cable_pattern;
    jg["uniplet_section"] = g.uniplet_section;
    jg["cable_section"] = g.cable_section;
    jg["material"] = g.material;
    if (g.spacing) {
      jg["spacing"] = *g.spacing;
      jg["connector_pattern"] = g.connector_pattern;
    }
    j["generator"] = std::move(jg);
  }

  if (doc.optimizer) {
    const OptimizerBlock& b = *doc.optimizer;
    ordered_json jb;
    jb["population"] = b.population;
    jb["iterations"] = b.iterations;
    jb["seed"] = b.seed;
    jb["stress_limit"] = b.stress_limit;
    jb["deflection_limit"] = b.deflection_limit;
    jb["penalty_exponent"] = b.penalty_exponent;
    const auto bound = [](const std::vector<double>& v) {
      return v.size() == 1 ? ordered_json(v.front()) : ordered_json(v);
    };
    jb["lower_bound"] = bound(b.lower_bound);
    jb["upper_bound"] = bound(b.upper_bound);
    if (!b.groups.empty()) jb["groups"] = b.groups;
    if (!b.catalog.empty()) jb["catalog"] = b.catalog;
    j["optimizer"] = std::move(jb);
  }

  return j.dump(2) + "\n";
}

ModelDocument document_from_model(const Model& model, const UnitsDecl& units,
                                  std::vector<std::string> provenance) {
  ModelDocument doc;
  doc.units = units;
  doc.planar = model.planar;
  doc.provenance = std::move(provenance);

  const double from_mm = 1.0 / units.length_to_mm();
  const double from_n = 1.0 / units.force_to_n();

  doc.nodes = model.nodes;
  for (auto& n : doc.nodes) n.position *= from_mm;
  doc.sections = model.sections;
  doc.materials = model.materials;
  for (auto& m : doc.materials) m.unit_weight *= 1e9;  // kg/mm^3 -> kg/m^3
  doc.members = model.members;
  doc.supports = model.supports;
  doc.loads = model.loads;
  for (auto& l : doc.loads) l.force *= from_n;
  return doc;
}

DesignSpace design_space_from_block(const Model& model, const OptimizerBlock& block) {
  DesignSpace space;
  if (block.groups.empty()) {
    for (const auto& m : model.members) space.groups.push_back({m.id});
  } else {
    std::set<int> seen;
    for (const auto& group : block.groups) {
      for (int id : group) {
        if (model.member_index(id) < 0) {
          throw ConfigError("optimizer group references missing member " + std::to_string(id));
        }
        if (!seen.insert(id).second) {
          throw ConfigError("member " + std::to_string(id) + " appears in two optimizer groups");
        }
      }
    }
    space.groups = block.groups;
  }

  const int n = space.variable_count();
  const auto broadcast = [&](const std::vector<double>& v, const char* what) {
    if (v.size() == 1) return Eigen::VectorXd::Constant(n, v.front()).eval();
    if (static_cast<int>(v.size()) != n) {
      throw ConfigError(std::string(what) + " must be a scalar or one entry per variable");
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), n).eval();
  };
  space.lower_bound = broadcast(block.lower_bound, "lower_bound");
  space.upper_bound = broadcast(block.upper_bound, "upper_bound");
  space.catalog = block.catalog;
  space.stress_limit = block.stress_limit;
  space.deflection_limit = block.deflection_limit;
  space.penalty_exponent = block.penalty_exponent;
  space.validate();
  return space;
}

}  // namespace panto
