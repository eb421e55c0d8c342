#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "panto/errors.hpp"

namespace panto {

using Vec3 = Eigen::Vector3d;

struct ModelDocument;  // see panto/document.hpp

/// Internal units are N, mm and N/mm^2 throughout; densities kg/mm^3.

struct Node {
  int id = 0;
  Vec3 position = Vec3::Zero();  // mm
};

struct Section {
  int id = 0;
  double area = 0.0;             // mm^2
  double second_moment_y = 0.0;  // mm^4
  double second_moment_z = 0.0;  // mm^4
};

struct Material {
  int id = 0;
  double elastic_modulus = 0.0;  // N/mm^2
  double unit_weight = 0.0;      // kg/mm^3
};

enum class MemberKind : std::uint8_t { Bar, Cable, Uniplet };

const char* to_string(MemberKind kind);

/// Bars and cables reference two nodes; uniplets reference three,
/// in i, j, k order with j the pivot on the straight segment i-k.
struct Member {
  int id = 0;
  MemberKind kind = MemberKind::Bar;
  std::vector<int> nodes;
  int section = 0;
  int material = 0;
};

struct Support {
  int node = 0;
  bool fix_x = false;
  bool fix_y = false;
  bool fix_z = false;
};

struct PointLoad {
  int node = 0;
  Vec3 force = Vec3::Zero();  // N
};

/// An analyzable structure. Immutable once built; share freely across
/// threads. Construct through build_model() so every invariant holds.
struct Model {
  std::vector<Node> nodes;
  std::vector<Section> sections;
  std::vector<Material> materials;
  std::vector<Member> members;
  std::vector<Support> supports;
  std::vector<PointLoad> loads;
  bool planar = false;  // planar models fix every z DoF implicitly

  int node_index(int id) const;      // -1 when absent
  int section_index(int id) const;
  int material_index(int id) const;
  int member_index(int id) const;

  const Node& node(int id) const;
  const Section& section(int id) const;
  const Material& material(int id) const;
  const Member& member(int id) const;

  double member_length(const Member& m) const;  // chord length i..k, mm
  /// Unit direction along the member axis (first node toward last).
  Vec3 member_axis(const Member& m) const;

  /// Copy of this model with per-member cross-section areas replaced.
  /// areas_by_member maps member id -> new area (mm^2); members not
  /// listed keep their section. Second moments are preserved.
  Model with_member_areas(const std::vector<std::pair<int, double>>& areas_by_member) const;
};

/// Distance of the pivot from the straight segment i-k must not exceed
/// this fraction of the segment length.
inline constexpr double kUnipletCollinearityTol = 1e-6;

/// Structural invariant checks (ids, references, lengths, collinearity,
/// support references, finite loads). Does not test kinematic stability;
/// build_model adds that via a trial factorization.
std::vector<Violation> model_violations(const Model& model);

/// Validates a parsed document and produces a Model, or the full list of
/// violations including the all-cables-active stability check.
struct BuildResult {
  std::optional<Model> model;
  std::vector<Violation> violations;
  bool ok() const { return model.has_value(); }
};

BuildResult build_model(const ModelDocument& document);

/// Throwing convenience wrapper around build_model.
Model build_model_or_throw(const ModelDocument& document);

/// Node-to-global-DoF numbering over translational DoFs. Free DoFs come
/// first and are contiguous; supported (and in planar mode, z) DoFs
/// follow. Every (node, axis) pair is exactly one of free/fixed.
struct DofMap {
  int axis_count = 3;   // 2 in planar mode
  int free_count = 0;
  int total_count = 0;  // free + fixed
  std::vector<int> index;  // [node_index * 3 + axis] -> global dof, -1 for planar z

  int dof(int node_index, int axis) const { return index[3 * node_index + axis]; }
  bool is_free(int node_index, int axis) const {
    int d = dof(node_index, axis);
    return d >= 0 && d < free_count;
  }
};

DofMap dof_map(const Model& model);

}  // namespace panto
