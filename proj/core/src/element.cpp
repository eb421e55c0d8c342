#include "panto/element.hpp"

#include <Eigen/Cholesky>

#include <array>
#include <cmath>

#include "panto/errors.hpp"

namespace panto {

Matrix6d truss_stiffness_global(double elastic_modulus, double area,
                                const Vec3& node_a, const Vec3& node_b) {
  const Vec3 chord = node_b - node_a;
  const double length = chord.norm();
  if (length <= 0.0) {
    throw Error("truss stiffness: zero-length member");
  }
  const Vec3 d = chord / length;
  const Eigen::Matrix3d block = (elastic_modulus * area / length) * (d * d.transpose());

  Matrix6d k;
  k << block, -block, -block, block;
  return k;
}

UnipletStiffness uniplet_stiffness_closed_form(double elastic_modulus, double area,
                                               double second_moment_y, double second_moment_z,
                                               double semi_length_1, double semi_length_2) {
  if (semi_length_1 <= 0.0 || semi_length_2 <= 0.0) {
    throw Error("uniplet stiffness: non-positive semi-length");
  }
  const double E = elastic_modulus;
  const double m = 1.0 / semi_length_1;
  const double n = 1.0 / semi_length_2;

  UnipletStiffness out;
  out.semi_length_1 = semi_length_1;
  out.semi_length_2 = semi_length_2;
  Matrix9d& k = out.k;

  // Axial chain over DoFs (1, 4, 7) -> indices 0, 3, 6.
  k(0, 0) = E * area * m;
  k(0, 3) = k(3, 0) = -E * area * m;
  k(3, 3) = E * area * (m + n);
  k(3, 6) = k(6, 3) = -E * area * n;
  k(6, 6) = E * area * n;

  // Transverse coefficients share one shape in both bending planes.
  const auto fill_bending = [&](double inertia, int a, int b, int c) {
    const double f = 3.0 * E * inertia / (m + n);
    k(a, a) = f * m * m * m * n;
    k(a, b) = k(b, a) = f * (-m * m * m * n - m * m * n * n);
    k(a, c) = k(c, a) = f * m * m * n * n;
    k(b, b) = f * (m * m * m * n + m * n * n * n + 2.0 * m * m * n * n);
    k(b, c) = k(c, b) = f * (-m * n * n * n - m * m * n * n);
    k(c, c) = f * m * n * n * n;
  };
  fill_bending(second_moment_z, 1, 4, 7);  // y translations
  fill_bending(second_moment_y, 2, 5, 8);  // z translations

  return out;
}

namespace {

// Euler-Bernoulli segment bending block on [v_a, rot_a, v_b, rot_b].
// `sign` flips the translation-rotation coupling; the x-z plane pairs a
// +z displacement with a -theta_y end slope.
void add_segment_bending(Eigen::Matrix<double, 15, 15>& k, double ei, double length,
                         const std::array<int, 4>& dofs, double sign) {
  const double L = length;
  const double f = ei / (L * L * L);
  const double c[4][4] = {
      {12.0, sign * 6.0 * L, -12.0, sign * 6.0 * L},
      {sign * 6.0 * L, 4.0 * L * L, -sign * 6.0 * L, 2.0 * L * L},
      {-12.0, -sign * 6.0 * L, 12.0, -sign * 6.0 * L},
      {sign * 6.0 * L, 2.0 * L * L, -sign * 6.0 * L, 4.0 * L * L}};
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      k(dofs[r], dofs[s]) += f * c[r][s];
    }
  }
}

}  // namespace

UnipletStiffness uniplet_stiffness_by_condensation(double elastic_modulus, double area,
                                                   double second_moment_y, double second_moment_z,
                                                   double semi_length_1, double semi_length_2) {
  if (semi_length_1 <= 0.0 || semi_length_2 <= 0.0) {
    throw Error("uniplet stiffness: non-positive semi-length");
  }

  // Parent element DoFs: translations [ix iy iz jx jy jz kx ky kz] then
  // rotations [iy iz jy jz ky kz] (no torsion).
  Eigen::Matrix<double, 15, 15> k = Eigen::Matrix<double, 15, 15>::Zero();
  const auto tx = [](int node) { return 3 * node; };
  const auto ry = [](int node) { return 9 + 2 * node; };
  const auto rz = [](int node) { return 9 + 2 * node + 1; };

  const auto add_segment = [&](int na, int nb, double length) {
    const double ka = elastic_modulus * area / length;
    k(tx(na), tx(na)) += ka;
    k(tx(nb), tx(nb)) += ka;
    k(tx(na), tx(nb)) -= ka;
    k(tx(nb), tx(na)) -= ka;
    add_segment_bending(k, elastic_modulus * second_moment_z, length,
                        {tx(na) + 1, rz(na), tx(nb) + 1, rz(nb)}, +1.0);
    add_segment_bending(k, elastic_modulus * second_moment_y, length,
                        {tx(na) + 2, ry(na), tx(nb) + 2, ry(nb)}, -1.0);
  };
  add_segment(0, 1, semi_length_1);
  add_segment(1, 2, semi_length_2);

  // Condense the rotations that carry stiffness; a zero-inertia plane
  // contributes nothing and drops out exactly.
  std::vector<int> active;
  for (int r = 9; r < 15; ++r) {
    if (k(r, r) > 0.0) {
      active.push_back(r);
    }
  }

  UnipletStiffness out;
  out.semi_length_1 = semi_length_1;
  out.semi_length_2 = semi_length_2;

  const Eigen::Matrix<double, 9, 9> kdd = k.topLeftCorner<9, 9>();
  if (active.empty()) {
    out.k = kdd;
    return out;
  }

  const int nr = static_cast<int>(active.size());
  Eigen::MatrixXd kdt(9, nr);
  Eigen::MatrixXd ktt(nr, nr);
  for (int c = 0; c < nr; ++c) {
    kdt.col(c) = k.block(0, active[c], 9, 1);
    for (int r = 0; r < nr; ++r) {
      ktt(r, c) = k(active[r], active[c]);
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(ktt);
  if (llt.info() != Eigen::Success) {
    throw Error("uniplet stiffness: singular rotation block");
  }
  Eigen::Matrix<double, 9, 9> condensed = kdd - kdt * llt.solve(kdt.transpose());
  out.k = 0.5 * (condensed + condensed.transpose());
  return out;
}

Eigen::Matrix3d member_frame(const Vec3& axis) {
  const double norm = axis.norm();
  if (norm <= 0.0) {
    throw Error("member frame: zero axis");
  }
  const Vec3 x = axis / norm;
  const Vec3 reference = std::abs(x.z()) > 0.99 ? Vec3::UnitX() : Vec3::UnitZ();
  const Vec3 y = reference.cross(x).normalized();
  const Vec3 z = x.cross(y);

  Eigen::Matrix3d frame;
  frame.col(0) = x;
  frame.col(1) = y;
  frame.col(2) = z;
  return frame;
}

Eigen::MatrixXd to_global(const Eigen::MatrixXd& k_local, const Eigen::Matrix3d& rotation) {
  const Eigen::Index dim = k_local.rows();
  if (k_local.cols() != dim || dim % 3 != 0) {
    throw Error("to_global: stiffness must be square with 3-DoF node blocks");
  }
  const double gram = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
                          .cwiseAbs()
                          .maxCoeff();
  if (gram > 1e-10 || rotation.determinant() < 0.0) {
    throw Error("to_global: rotation is not orthonormal");
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim / 3; ++b) {
    t.block<3, 3>(3 * b, 3 * b) = rotation;
  }
  return t * k_local * t.transpose();
}

}  // namespace panto
