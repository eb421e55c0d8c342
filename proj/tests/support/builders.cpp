#include "builders.hpp"

#include <cmath>

#include "panto/errors.hpp"
#include "panto/geometry.hpp"

#ifndef PANTO_FIXTURE_DIR
#define PANTO_FIXTURE_DIR "fixtures"
#endif

namespace panto::testing {

std::string fixture_path(const std::string& name) {
  return std::string(PANTO_FIXTURE_DIR) + "/" + name;
}

Model single_bar_model(double elastic_modulus, double area, double length_mm,
                       double axial_load_n, double density_kg_m3) {
  Model m;
  m.planar = true;
  m.nodes = {{1, Vec3(0, 0, 0)}, {2, Vec3(length_mm, 0, 0)}};
  m.sections = {{1, area, 0.0, 0.0}};
  m.materials = {{1, elastic_modulus, density_kg_m3 * 1e-9}};
  m.members = {{1, MemberKind::Bar, {1, 2}, 1, 1}};
  m.supports = {{1, true, true, false}, {2, false, true, false}};
  m.loads = {{2, Vec3(axial_load_n, 0, 0)}};
  return m;
}

Model pantograph_grid(const PantographGridParams& p) {
  Model m;
  m.planar = false;
  m.sections = {{1, p.area, p.second_moment, p.second_moment}};
  m.materials = {{1, p.elastic_modulus, 7850.0 * 1e-9}};

  const int nx = p.cells_x + 1;
  const int ny = p.cells_y + 1;
  const auto bottom_id = [&](int i, int j) { return 1 + j * nx + i; };
  const auto top_id = [&](int i, int j) { return nx * ny + 1 + j * nx + i; };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.nodes.push_back({bottom_id(i, j), Vec3(i * p.cell, j * p.cell, 0.0)});
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.nodes.push_back({top_id(i, j), Vec3(i * p.cell, j * p.cell, p.height)});
    }
  }

  int member_id = 0;
  // Bottom-layer cables along both grid directions.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      m.members.push_back({++member_id, MemberKind::Cable,
                           {bottom_id(i, j), bottom_id(i + 1, j)}, 1, 1});
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      m.members.push_back({++member_id, MemberKind::Cable,
                           {bottom_id(i, j), bottom_id(i, j + 1)}, 1, 1});
    }
  }
  // Both plan diagonals of every bottom cell; without them the interior
  // grid planes can slide longitudinally as a mechanism.
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      m.members.push_back({++member_id, MemberKind::Cable,
                           {bottom_id(i, j), bottom_id(i + 1, j + 1)}, 1, 1});
      m.members.push_back({++member_id, MemberKind::Cable,
                           {bottom_id(i + 1, j), bottom_id(i, j + 1)}, 1, 1});
    }
  }
  // Top-layer chords carry compression, so they are bars.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      m.members.push_back({++member_id, MemberKind::Bar,
                           {top_id(i, j), top_id(i + 1, j)}, 1, 1});
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      m.members.push_back({++member_id, MemberKind::Bar,
                           {top_id(i, j), top_id(i, j + 1)}, 1, 1});
    }
  }
  // Vertical bars at the four supported corners.
  for (int i : {0, nx - 1}) {
    for (int j : {0, ny - 1}) {
      m.members.push_back({++member_id, MemberKind::Bar,
                           {bottom_id(i, j), top_id(i, j)}, 1, 1});
    }
  }

  int next_node_id = 2 * nx * ny;
  const auto add_scissor = [&](int bottom_a, int top_a, int bottom_b, int top_b) {
    if (p.uniplet_form) {
      const Vec3 centre = 0.5 * (m.nodes[bottom_a - 1].position + m.nodes[top_b - 1].position);
      const int pivot = ++next_node_id;
      m.nodes.push_back({pivot, centre});
      m.members.push_back({++member_id, MemberKind::Uniplet, {bottom_a, pivot, top_b}, 1, 1});
      m.members.push_back({++member_id, MemberKind::Uniplet, {top_a, pivot, bottom_b}, 1, 1});
    } else {
      m.members.push_back({++member_id, MemberKind::Bar, {bottom_a, top_b}, 1, 1});
      m.members.push_back({++member_id, MemberKind::Bar, {top_a, bottom_b}, 1, 1});
    }
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      add_scissor(bottom_id(i, j), top_id(i, j), bottom_id(i + 1, j), top_id(i + 1, j));
    }
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      add_scissor(bottom_id(i, j), top_id(i, j), bottom_id(i, j + 1), top_id(i, j + 1));
    }
  }

  for (int i : {0, nx - 1}) {
    for (int j : {0, ny - 1}) {
      m.supports.push_back({bottom_id(i, j), true, true, true});
    }
  }
  if (p.top_node_load != 0.0) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        m.loads.push_back({top_id(i, j), Vec3(0.0, 0.0, -p.top_node_load)});
      }
    }
  }
  return m;
}

namespace {

std::vector<Section> arch_sections() {
  return {{1, 28.0, 290.0, 290.0}, {2, 6.28, 0.0, 0.0}};
}

std::vector<Material> arch_materials() { return {{1, 210000.0, 7850.0 * 1e-9}}; }

}  // namespace

Model loaded_arch(double load_n_per_outer_hinge) {
  const PolarUnitGeometry geom = polar_unit_parameters(3.0, 0.45, 180.0, 36.0);
  Model arch = build_polar_arch(geom, arch_sections(), arch_materials());
  const int n = geom.unit_count;
  for (int station = 1; station < n; ++station) {
    arch.loads.push_back({n + 2 + station, Vec3(0.0, -load_n_per_outer_hinge, 0.0)});
  }
  return arch;
}

Model loaded_double_arch(double load_n_per_outer_hinge, double spacing_m) {
  const PolarUnitGeometry geom = polar_unit_parameters(3.0, 0.45, 180.0, 36.0);
  Model arch = build_polar_arch(geom, arch_sections(), arch_materials());
  const int n = geom.unit_count;
  for (int station = 1; station < n; ++station) {
    arch.loads.push_back({n + 2 + station, Vec3(0.0, -load_n_per_outer_hinge, 0.0)});
  }
  return extrude_to_3d(arch, spacing_m, ConnectorPattern::Scissors);
}

Model random_cable_model(std::mt19937_64& rng, int max_cables) {
  const auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  const auto uniform = [&](double lo, double hi) { return lo + unit() * (hi - lo); };
  const auto pick = [&](int n) { return static_cast<int>(unit() * n) % n; };

  Model m;
  m.planar = true;
  m.sections = {{1, 100.0, 0.0, 0.0}, {2, 10.0, 0.0, 0.0}};
  m.materials = {{1, 210000.0, 7850e-9}};

  // Two pinned base nodes, then grow: each new node hangs on two bars to
  // previously placed nodes, which keeps the bar skeleton rigid.
  m.nodes = {{1, Vec3(0, 0, 0)}, {2, Vec3(1000, 0, 0)}};
  m.supports = {{1, true, true, false}, {2, true, true, false}};

  const int extra_nodes = 2 + pick(3);  // 2..4 free nodes
  int member_id = 0;
  for (int k = 0; k < extra_nodes; ++k) {
    const int id = static_cast<int>(m.nodes.size()) + 1;
    Vec3 pos(uniform(-500.0, 1500.0), uniform(300.0, 1500.0), 0.0);
    // Attach to two distinct existing nodes, not collinear with them.
    int a = pick(id - 1) + 1;
    int b = pick(id - 1) + 1;
    while (b == a) b = pick(id - 1) + 1;
    const Vec3 pa = m.nodes[a - 1].position;
    const Vec3 pb = m.nodes[b - 1].position;
    Vec3 da = (pos - pa).normalized();
    Vec3 db = (pos - pb).normalized();
    if (std::abs(da.cross(db).norm()) < 0.1) {
      pos.y() += 400.0;  // nudge off the degenerate line
    }
    m.nodes.push_back({id, pos});
    m.members.push_back({++member_id, MemberKind::Bar, {a, id}, 1, 1});
    m.members.push_back({++member_id, MemberKind::Bar, {b, id}, 1, 1});
  }

  const int cables = 1 + pick(max_cables);
  const int node_count = static_cast<int>(m.nodes.size());
  std::set<std::pair<int, int>> used;
  for (const auto& mem : m.members) {
    used.insert({std::min(mem.nodes[0], mem.nodes[1]), std::max(mem.nodes[0], mem.nodes[1])});
  }
  for (int c = 0; c < cables; ++c) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      int a = pick(node_count) + 1;
      int b = pick(node_count) + 1;
      if (a == b) continue;
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (used.count(key)) continue;
      if ((m.nodes[a - 1].position - m.nodes[b - 1].position).norm() < 1.0) continue;
      used.insert(key);
      m.members.push_back({++member_id, MemberKind::Cable, {a, b}, 2, 1});
      break;
    }
  }

  for (int ni = 2; ni < node_count; ++ni) {  // loads on free nodes only
    m.loads.push_back({m.nodes[ni].id, Vec3(uniform(-2000.0, 2000.0),
                                            uniform(-2000.0, 2000.0), 0.0)});
  }
  return m;
}

std::vector<std::vector<CableFlag>> consistent_cable_sets(const Model& model) {
  std::vector<int> cable_ids;
  for (const auto& mem : model.members) {
    if (mem.kind == MemberKind::Cable) cable_ids.push_back(mem.id);
  }
  const int c = static_cast<int>(cable_ids.size());

  std::vector<std::vector<CableFlag>> consistent;
  for (unsigned mask = 0; mask < (1u << c); ++mask) {
    std::vector<CableFlag> flags(c);
    for (int k = 0; k < c; ++k) {
      flags[k] = (mask >> k) & 1u ? CableFlag::Active : CableFlag::Passive;
    }
    SolveResult solution;
    try {
      solution = solve_with_flags(model, flags);
    } catch (const UnstableError&) {
      continue;
    }
    const std::vector<double> elongations = cable_elongations(model, solution.displacements);
    bool fixed_point = true;
    for (int k = 0; k < c && fixed_point; ++k) {
      const Member& mem = model.member(cable_ids[k]);
      const double ea_over_l = model.material(mem.material).elastic_modulus *
                               model.section(mem.section).area / model.member_length(mem);
      const double force = ea_over_l * elongations[k];
      const CableFlag next =
          force > -1e-9 * ea_over_l ? CableFlag::Active : CableFlag::Passive;
      fixed_point = next == flags[k];
    }
    if (fixed_point) consistent.push_back(std::move(flags));
  }
  return consistent;
}

}  // namespace panto::testing
