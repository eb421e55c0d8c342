#include "panto/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "panto/element.hpp"

namespace panto {

int CableState::active_count() const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), CableFlag::Active));
}

int CableState::passive_count() const {
  return static_cast<int>(flags.size()) - active_count();
}

namespace {

std::vector<int> cable_member_ids(const Model& model) {
  std::vector<int> ids;
  for (const auto& m : model.members) {
    if (m.kind == MemberKind::Cable) ids.push_back(m.id);
  }
  return ids;
}

// Scatter an element matrix whose DoFs are 3 per node into the global
// system. In planar mode the z rows simply map to no global DoF.
void scatter(Eigen::MatrixXd& k_global, const Eigen::MatrixXd& k_element,
             const std::vector<int>& element_dofs) {
  const int n = static_cast<int>(element_dofs.size());
  for (int r = 0; r < n; ++r) {
    const int gr = element_dofs[r];
    if (gr < 0) continue;
    for (int c = 0; c < n; ++c) {
      const int gc = element_dofs[c];
      if (gc < 0) continue;
      k_global(gr, gc) += k_element(r, c);
    }
  }
}

std::vector<int> member_global_dofs(const Model& model, const DofMap& dofs, const Member& m) {
  std::vector<int> out;
  out.reserve(3 * m.nodes.size());
  for (int nid : m.nodes) {
    const int ni = model.node_index(nid);
    for (int axis = 0; axis < 3; ++axis) {
      out.push_back(axis < dofs.axis_count ? dofs.dof(ni, axis) : -1);
    }
  }
  return out;
}

}  // namespace

AssembledSystem assemble(const Model& model, std::span<const CableFlag> cable_flags) {
  AssembledSystem sys;
  sys.dofs = dof_map(model);
  sys.stiffness = Eigen::MatrixXd::Zero(sys.dofs.total_count, sys.dofs.total_count);
  sys.load = Eigen::VectorXd::Zero(sys.dofs.total_count);

  std::size_t cable_index = 0;
  for (const auto& m : model.members) {
    const Section& section = model.section(m.section);
    const Material& material = model.material(m.material);

    if (m.kind == MemberKind::Cable) {
      if (cable_index >= cable_flags.size()) {
        throw Error("assemble: cable flag vector does not cover every cable");
      }
      const CableFlag flag = cable_flags[cable_index++];
      if (flag == CableFlag::Passive) continue;  // slack cables carry nothing
    }

    const std::vector<int> dofs = member_global_dofs(model, sys.dofs, m);
    if (m.kind == MemberKind::Uniplet) {
      const Vec3 i = model.node(m.nodes[0]).position;
      const Vec3 j = model.node(m.nodes[1]).position;
      const Vec3 k = model.node(m.nodes[2]).position;
      const UnipletStiffness local = uniplet_stiffness_closed_form(
          material.elastic_modulus, section.area, section.second_moment_y,
          section.second_moment_z, (j - i).norm(), (k - j).norm());
      const Eigen::MatrixXd global = to_global(local.k, member_frame(k - i));
      scatter(sys.stiffness, global, dofs);
    } else {
      const Matrix6d k = truss_stiffness_global(material.elastic_modulus, section.area,
                                                model.node(m.nodes[0]).position,
                                                model.node(m.nodes[1]).position);
      scatter(sys.stiffness, k, dofs);
    }
  }
  if (cable_index != cable_flags.size()) {
    throw Error("assemble: more cable flags than cables");
  }

  for (const auto& load : model.loads) {
    const int ni = model.node_index(load.node);
    for (int axis = 0; axis < sys.dofs.axis_count; ++axis) {
      sys.load(sys.dofs.dof(ni, axis)) += load.force(axis);
    }
  }
  return sys;
}

namespace {

// Identify the DoF with the largest component of the near-null eigenvector.
UnstableDof diagnose_near_null(const Model& model, const DofMap& dofs,
                               const Eigen::VectorXd& null_vector) {
  int worst = 0;
  null_vector.cwiseAbs().maxCoeff(&worst);
  for (std::size_t ni = 0; ni < model.nodes.size(); ++ni) {
    for (int axis = 0; axis < dofs.axis_count; ++axis) {
      if (dofs.dof(static_cast<int>(ni), axis) == worst) {
        return {model.nodes[ni].id, axis};
      }
    }
  }
  return {0, 0};
}

[[noreturn]] void throw_unstable(const Model& model, const DofMap& dofs,
                                 const Eigen::MatrixXd& k_free) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k_free);
  const UnstableDof bad = diagnose_near_null(model, dofs, eig.eigenvectors().col(0));
  const char axis_name[] = {'x', 'y', 'z'};
  std::ostringstream msg;
  msg << "unstable configuration: free stiffness is singular or indefinite near node "
      << bad.node << " axis " << axis_name[bad.axis];
  throw UnstableError(msg.str(), bad.node, bad.axis);
}

}  // namespace

StaticSolution solve_static(const Model& model, const AssembledSystem& system) {
  const DofMap& dofs = system.dofs;
  const int nf = dofs.free_count;
  const Eigen::MatrixXd k_free = system.free_stiffness();
  const Eigen::VectorXd f_free = system.load.head(nf);

  StaticSolution sol;
  sol.displacements = Eigen::MatrixX3d::Zero(static_cast<Eigen::Index>(model.nodes.size()), 3);

  Eigen::VectorXd u_free = Eigen::VectorXd::Zero(nf);
  if (nf > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(k_free);
    if (llt.info() != Eigen::Success) {
      throw_unstable(model, dofs, k_free);
    }
    u_free = llt.solve(f_free);
    u_free += llt.solve(f_free - k_free * u_free);  // one refinement pass

    const double f_norm = f_free.norm();
    const double residual = (k_free * u_free - f_free).norm();
    sol.equilibrium_residual = f_norm > 0.0 ? residual / f_norm : residual;
    if (sol.equilibrium_residual > 1e-8) {
      throw_unstable(model, dofs, k_free);
    }
  }

  for (std::size_t ni = 0; ni < model.nodes.size(); ++ni) {
    for (int axis = 0; axis < dofs.axis_count; ++axis) {
      const int d = dofs.dof(static_cast<int>(ni), axis);
      if (d < nf) {
        sol.displacements(static_cast<Eigen::Index>(ni), axis) = u_free(d);
      }
    }
  }

  // Reactions: fixed-row stiffness times the free displacements, minus
  // any load applied directly on the support.
  const Eigen::VectorXd r_fixed =
      system.stiffness.bottomLeftCorner(dofs.total_count - nf, nf) * u_free -
      system.load.tail(dofs.total_count - nf);
  for (const auto& s : model.supports) {
    const int ni = model.node_index(s.node);
    SupportReaction reaction;
    reaction.node = s.node;
    const bool fixed_axis[3] = {s.fix_x, s.fix_y, s.fix_z};
    for (int axis = 0; axis < dofs.axis_count; ++axis) {
      if (!fixed_axis[axis]) continue;
      const int d = dofs.dof(ni, axis);
      reaction.force(axis) = r_fixed(d - nf);
    }
    sol.reactions.push_back(reaction);
  }
  return sol;
}

std::optional<UnstableDof> check_stability(const Model& model) {
  const std::vector<CableFlag> all_active(cable_member_ids(model).size(), CableFlag::Active);
  const AssembledSystem sys = assemble(model, all_active);
  const int nf = sys.dofs.free_count;
  if (nf == 0) return std::nullopt;

  const Eigen::MatrixXd k_free = sys.free_stiffness();
  Eigen::LLT<Eigen::MatrixXd> llt(k_free);
  bool unstable = llt.info() != Eigen::Success;
  if (!unstable) {
    // A successful Cholesky can still hide a numerically null pivot.
    const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
    unstable = d.minCoeff() * d.minCoeff() <= 1e-12 * d.maxCoeff() * d.maxCoeff();
  }
  if (!unstable) return std::nullopt;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k_free);
  return diagnose_near_null(model, sys.dofs, eig.eigenvectors().col(0));
}

std::vector<double> member_forces(const Model& model, const Eigen::MatrixX3d& displacements,
                                  std::span<const CableFlag> cable_flags) {
  std::vector<double> forces;
  forces.reserve(model.members.size());

  std::size_t cable_index = 0;
  for (const auto& m : model.members) {
    if (m.kind == MemberKind::Cable && cable_flags[cable_index++] == CableFlag::Passive) {
      forces.push_back(0.0);
      continue;
    }
    const Section& section = model.section(m.section);
    const Material& material = model.material(m.material);
    const int a = model.node_index(m.nodes.front());
    const int b = model.node_index(m.nodes.back());
    const Vec3 axis = model.member_axis(m);
    const double elongation =
        (displacements.row(b) - displacements.row(a)).dot(axis.transpose());
    const double length = model.member_length(m);
    forces.push_back(material.elastic_modulus * section.area / length * elongation);
  }
  return forces;
}

std::vector<double> cable_elongations(const Model& model, const Eigen::MatrixX3d& displacements) {
  std::vector<double> out;
  for (const auto& m : model.members) {
    if (m.kind != MemberKind::Cable) continue;
    const int a = model.node_index(m.nodes.front());
    const int b = model.node_index(m.nodes.back());
    const Vec3 axis = model.member_axis(m);
    out.push_back((displacements.row(b) - displacements.row(a)).dot(axis.transpose()));
  }
  return out;
}

namespace {

SolveResult finish_solve(const Model& model, const StaticSolution& sol, CableState state) {
  SolveResult result;
  result.displacements = sol.displacements;
  result.reactions = sol.reactions;
  result.member_forces = member_forces(model, sol.displacements, state.flags);
  result.cable_state = std::move(state);
  result.max_displacement = 0.0;
  for (Eigen::Index r = 0; r < sol.displacements.rows(); ++r) {
    result.max_displacement = std::max(result.max_displacement, sol.displacements.row(r).norm());
  }
  return result;
}

// Taut threshold per cable: tiny fraction of its axial stiffness scale.
std::vector<double> cable_force_tolerances(const Model& model) {
  std::vector<double> out;
  for (const auto& m : model.members) {
    if (m.kind != MemberKind::Cable) continue;
    const double ea_over_l = model.material(m.material).elastic_modulus *
                             model.section(m.section).area / model.member_length(m);
    out.push_back(1e-9 * ea_over_l);
  }
  return out;
}

}  // namespace

SolveResult solve_with_flags(const Model& model, std::span<const CableFlag> cable_flags) {
  const AssembledSystem sys = assemble(model, cable_flags);
  const StaticSolution sol = solve_static(model, sys);

  CableState state;
  state.cable_members = cable_member_ids(model);
  state.flags.assign(cable_flags.begin(), cable_flags.end());
  state.iterations = 1;
  state.history.push_back(state.flags);
  return finish_solve(model, sol, std::move(state));
}

SolveResult iterate_cable_status(const Model& model, const IterationOptions& options) {
  CableState state;
  state.cable_members = cable_member_ids(model);
  const std::size_t n_cables = state.cable_members.size();
  const std::vector<double> tolerance = cable_force_tolerances(model);

  std::vector<CableFlag> flags(n_cables, CableFlag::Active);
  state.history.push_back(flags);

  std::optional<StaticSolution> solution;
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    const AssembledSystem sys = assemble(model, flags);
    try {
      solution = solve_static(model, sys);
    } catch (const UnstableError& e) {
      if (iteration == 1) throw;
      std::ostringstream msg;
      msg << "structure became unstable after cable removal (iteration " << iteration
          << "): " << e.what();
      throw UnstableError(msg.str(), e.node_id(), e.axis());
    }
    state.iterations = iteration;

    // Would-be axial force of every cable under this displacement field;
    // exact zero counts as taut.
    const std::vector<double> elongations = cable_elongations(model, solution->displacements);
    std::vector<CableFlag> next(n_cables);
    for (std::size_t c = 0; c < n_cables; ++c) {
      const Member& m = model.member(state.cable_members[c]);
      const double ea_over_l = model.material(m.material).elastic_modulus *
                               model.section(m.section).area / model.member_length(m);
      const double force = ea_over_l * elongations[c];
      next[c] = force > -tolerance[c] ? CableFlag::Active : CableFlag::Passive;
    }

    state.history.push_back(next);
    if (next == flags) {
      state.flags = flags;
      return finish_solve(model, *solution, std::move(state));
    }
    for (std::size_t h = 0; h + 1 < state.history.size() - 1; ++h) {
      if (state.history[h] == next) {
        std::ostringstream msg;
        msg << "cable status iteration entered a cycle (state of iteration " << h
            << " revisited at iteration " << iteration << ")";
        throw CableCycleError(msg.str());
      }
    }
    flags = std::move(next);
  }

  std::ostringstream msg;
  msg << "cable status iteration did not converge within " << options.max_iterations
      << " iterations";
  throw Error(msg.str());
}

}  // namespace panto
