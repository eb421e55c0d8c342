#pragma once

#include <optional>
#include <string>
#include <vector>

#include "panto/model.hpp"
#include "panto/optimizer.hpp"

namespace panto {

/// Units a document may declare. Node coordinates and generator lengths
/// use the length unit, loads the force unit. Section properties are
/// always mm^2/mm^4, elastic moduli N/mm^2, densities kg/m^3 and
/// deflection limits mm, independent of the declaration.
enum class LengthUnit : std::uint8_t { Millimetre, Metre };
enum class ForceUnit : std::uint8_t { Newton, Kilonewton };

struct UnitsDecl {
  LengthUnit length = LengthUnit::Millimetre;
  ForceUnit force = ForceUnit::Newton;

  double length_to_mm() const { return length == LengthUnit::Metre ? 1000.0 : 1.0; }
  double force_to_n() const { return force == ForceUnit::Kilonewton ? 1000.0 : 1.0; }
};

/// Geometry-generator block: the document describes a polar arch by its
/// unit parameters instead of listing nodes. Lengths in metres, angles in
/// degrees (matching the generator interfaces).
struct GeneratorBlock {
  double inner_radius = 0.0;
  double width = 0.0;
  double total_angle = 0.0;
  double unit_angle = 0.0;
  std::string cable_pattern = "chords";
  int uniplet_section = 1;
  int cable_section = 2;
  int material = 1;
  std::optional<double> spacing;  // set -> extrude to 3D
  std::string connector_pattern = "scissors";
};

/// Optimization block. Bounds and catalog are mm^2. Groups list member
/// ids sharing one design variable; absent means one variable per member.
struct OptimizerBlock {
  int population = 25;
  int iterations = 100;
  std::uint64_t seed = 0;
  double stress_limit = 0.0;
  double deflection_limit = 0.0;
  double penalty_exponent = 2.0;
  std::vector<double> lower_bound;  // scalar broadcast when size 1
  std::vector<double> upper_bound;
  std::vector<std::vector<int>> groups;
  std::vector<double> catalog;
};

/// Parsed, schema-checked document. Values are kept in the declared
/// units; build_model() converts to N/mm.
struct ModelDocument {
  std::string schema = "panto-model/1";
  std::string title;
  std::vector<std::string> provenance;
  UnitsDecl units;
  bool planar = false;
  std::vector<Node> nodes;          // positions in the declared length unit
  std::vector<Section> sections;
  std::vector<Material> materials;  // unit_weight field holds kg/m^3 here
  std::vector<Member> members;
  std::vector<Support> supports;
  std::vector<PointLoad> loads;     // forces in the declared force unit
  std::optional<GeneratorBlock> generator;
  std::optional<OptimizerBlock> optimizer;
};

/// Strict parse: unknown keys, malformed values and schema violations all
/// raise ParseError with a line or field location. parse -> serialize ->
/// parse is the identity.
ModelDocument parse_model_document(const std::string& text);
ModelDocument load_model_document(const std::string& path);

/// Canonical serialization (fixed key order, two-space indent).
std::string serialize_model_document(const ModelDocument& document);

/// Wraps a model (internal units) back into a document, converting to the
/// requested units. Provenance lines are carried verbatim.
ModelDocument document_from_model(const Model& model, const UnitsDecl& units = {},
                                  std::vector<std::string> provenance = {});

/// Design space from the document's optimizer block (bounds broadcast,
/// default per-member grouping). Throws ConfigError on inconsistencies.
DesignSpace design_space_from_block(const Model& model, const OptimizerBlock& block);

}  // namespace panto
