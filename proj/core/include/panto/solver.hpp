#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "panto/model.hpp"

namespace panto {

enum class CableFlag : std::uint8_t { Active, Passive };

/// Active/passive resolution trace of one analysis.
struct CableState {
  std::vector<int> cable_members;            // member ids, model order
  std::vector<CableFlag> flags;              // converged flags
  int iterations = 0;                        // solves performed
  std::vector<std::vector<CableFlag>> history;  // ends with two equal entries

  int active_count() const;
  int passive_count() const;
};

/// Stiffness and load assembled over the DoF numbering of dof_map();
/// the leading free_count x free_count block is the free partition.
/// Passive cables contribute nothing.
struct AssembledSystem {
  Eigen::MatrixXd stiffness;  // total x total, symmetric
  Eigen::VectorXd load;       // total
  DofMap dofs;

  Eigen::Ref<const Eigen::MatrixXd> free_stiffness() const {
    return stiffness.topLeftCorner(dofs.free_count, dofs.free_count);
  }
};

AssembledSystem assemble(const Model& model, std::span<const CableFlag> cable_flags);

struct SupportReaction {
  int node = 0;
  Vec3 force = Vec3::Zero();  // N, components only on fixed axes
};

struct StaticSolution {
  Eigen::MatrixX3d displacements;         // per node row, mm; zero on fixed DoFs
  std::vector<SupportReaction> reactions;
  double equilibrium_residual = 0.0;      // ||K u - F|| / ||F||
};

/// Solves the free partition (dense symmetric factorization) and recovers
/// support reactions. Throws UnstableError naming a near-null DoF when the
/// matrix is singular or indefinite.
StaticSolution solve_static(const Model& model, const AssembledSystem& system);

/// Checks invertibility of the free partition with all cables active.
/// Returns the offending DoF when unstable.
struct UnstableDof {
  int node = 0;
  int axis = 0;
};
std::optional<UnstableDof> check_stability(const Model& model);

/// Axial member forces, N, tension positive; uniplet force from the end
/// displacements projected on the axis; passive cables report zero.
std::vector<double> member_forces(const Model& model, const Eigen::MatrixX3d& displacements,
                                  std::span<const CableFlag> cable_flags);

/// Chord elongations (mm) of every cable under a displacement field,
/// regardless of flag. Drives the active/passive update.
std::vector<double> cable_elongations(const Model& model, const Eigen::MatrixX3d& displacements);

struct SolveResult {
  Eigen::MatrixX3d displacements;      // mm
  std::vector<SupportReaction> reactions;
  std::vector<double> member_forces;   // per member, model order, N
  CableState cable_state;
  double max_displacement = 0.0;       // mm, largest nodal magnitude
};

struct IterationOptions {
  int max_iterations = 100;
};

/// Tension-only resolution: start with every cable active, solve, mark
/// cables that would shorten passive (and ones that would stretch active),
/// and repeat until two subsequent flag states agree. A revisited older
/// state raises CableCycleError instead of guessing.
SolveResult iterate_cable_status(const Model& model, const IterationOptions& options = {});

/// Convenience: one linear solve with the given flags (no iteration).
SolveResult solve_with_flags(const Model& model, std::span<const CableFlag> cable_flags);

}  // namespace panto
