#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "panto/model.hpp"
#include "panto/solver.hpp"

namespace panto::testing {

std::string fixture_path(const std::string& name);

/// One horizontal bar along +x, fixed at the left node; the right node
/// keeps only its axial DoF (y restrained) so the model is stable on its
/// own. Load applied axially at the tip.
Model single_bar_model(double elastic_modulus, double area, double length_mm,
                       double axial_load_n, double density_kg_m3 = 7850.0);

/// Square-on-square double-layer pantograph grid: cells_x x cells_y cells
/// of `cell` mm plan size and `height` mm depth, scissors in every
/// vertical grid plane, cables along every bottom-layer edge and both
/// plan diagonals of every bottom cell, top-layer chord bars, a vertical
/// corner bar at each of the four pinned bottom corners, and a downward
/// load on every top-layer node. With uniplet_form the scissors are
/// three-node uniplets sharing a pivot; otherwise plain crossing bars.
struct PantographGridParams {
  int cells_x = 4;
  int cells_y = 4;
  double cell = 2000.0;    // mm
  double height = 2000.0;  // mm
  double area = 28.0;      // mm^2, all members
  double second_moment = 290.0;
  double elastic_modulus = 210000.0;
  double top_node_load = 0.0;  // N, applied as -z on every top node
  bool uniplet_form = true;
};
Model pantograph_grid(const PantographGridParams& params);

/// Problem-3 style arch: the polar arch of the geometry module with a
/// downward load on the interior outer hinges.
Model loaded_arch(double load_n_per_outer_hinge);

/// Problem-4 style double arch (transverse scissors + chord cables).
Model loaded_double_arch(double load_n_per_outer_hinge, double spacing_m = 0.5);

/// Random stable planar truss with up to `max_cables` extra cables: the
/// bar skeleton is grown one node at a time with two non-parallel bars
/// (so it is rigid without any cable), then cables and nodal loads are
/// sprinkled on top.
Model random_cable_model(std::mt19937_64& rng, int max_cables);

/// Exhaustive tension-only oracle: every cable subset whose linear solve
/// reproduces itself under the active/passive update rule. Unstable
/// subsets are skipped.
std::vector<std::vector<CableFlag>> consistent_cable_sets(const Model& model);

}  // namespace panto::testing
