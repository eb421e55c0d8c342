#pragma once

#include <Eigen/Dense>

#include "panto/model.hpp"

namespace panto {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

/// 9x9 translation-only stiffness of a straight three-node member in
/// local axes (x axial, y/z transverse), DoF order
/// [ix iy iz jx jy jz kx ky kz]. For a free uniplet the matrix has rank 4:
/// three rigid translations plus the two linearized rigid rotations of the
/// collinear axis lie in its nullspace.
struct UnipletStiffness {
  Matrix9d k = Matrix9d::Zero();  // N/mm
  double semi_length_1 = 0.0;     // i-j, mm
  double semi_length_2 = 0.0;     // j-k, mm
};

/// Axial-only 6x6 global stiffness of a two-node member (bars, and cables
/// while active): EA/L times the dyadic of the unit direction.
Matrix6d truss_stiffness_global(double elastic_modulus, double area,
                                const Vec3& node_a, const Vec3& node_b);

/// Direct evaluation of the closed-form uniplet coefficients with
/// m = 1/L1 and n = 1/L2; mirrored entries filled by symmetry.
UnipletStiffness uniplet_stiffness_closed_form(double elastic_modulus, double area,
                                               double second_moment_y, double second_moment_z,
                                               double semi_length_1, double semi_length_2);

/// Independent route to the same matrix: assemble the 15-DoF two-segment
/// beam (per node three translations and the two bending rotations, no
/// torsion), then eliminate the rotations by static condensation
/// K_DD - K_Dt * K_tt^-1 * K_tD. With zero second moments the rotation
/// block vanishes and the axial-only chain is returned.
UnipletStiffness uniplet_stiffness_by_condensation(double elastic_modulus, double area,
                                                   double second_moment_y, double second_moment_z,
                                                   double semi_length_1, double semi_length_2);

/// Local frame for a member axis: local x along the axis, local y from
/// global z x axis (or global x x axis when the member is near vertical,
/// |cos| > 0.99), local z completing the right-handed triad. Columns of
/// the returned matrix are the local axes expressed globally.
Eigen::Matrix3d member_frame(const Vec3& axis);

/// Congruence transform of a local stiffness (6x6 or 9x9) into global
/// axes with the per-node block-diagonal of `rotation` (columns = local
/// axes in global coordinates). Throws on a non-orthonormal rotation.
Eigen::MatrixXd to_global(const Eigen::MatrixXd& k_local, const Eigen::Matrix3d& rotation);

}  // namespace panto
