#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace reslab {

using Vec3 = Eigen::Vector3d;

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  double volume() const;
  double area() const;
};

// Static material constants shared by all resonators.
struct Materials {
  double delta = 1e-3;  // contrast rho_r / rho_0
  double kappa_r = 1.0;
  double rho_r = 1.0;
};

// A set of pairwise disjoint spherical resonators plus material constants.
class ResonatorSystem {
 public:
  ResonatorSystem(std::vector<Sphere> spheres, Materials materials);

  std::size_t size() const { return spheres_.size(); }
  const std::vector<Sphere>& spheres() const { return spheres_; }
  const Sphere& sphere(std::size_t i) const { return spheres_.at(i); }
  const Materials& materials() const { return materials_; }

  // |D_i| for every resonator.
  Eigen::VectorXd volumes() const;
  bool equal_radii(double rel_tol = 1e-12) const;
  // Throws InputError unless all resonators have the same radius.
  void require_equal_radii() const;

 private:
  std::vector<Sphere> spheres_;
  Materials materials_;
};

// Flat-panel triangulation of one or more resonator boundaries.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> panel_resonator;

  std::size_t panel_count() const { return triangles.size(); }
  Vec3 vertex(std::size_t panel, int k) const { return vertices[triangles[panel][k]]; }
  Vec3 centroid(std::size_t panel) const;
  double area(std::size_t panel) const;
  double diameter(std::size_t panel) const;
  double total_area(int resonator) const;
  int resonator_count() const;
};

// Icosahedron subdivided `refinement` times, vertices projected onto the
// sphere: 20 * 4^refinement panels, all labelled resonator 0.
TriangleMesh mesh_sphere(const Sphere& sphere, int refinement);

// Union of per-sphere meshes, panels labelled by resonator index.
TriangleMesh mesh_system(const ResonatorSystem& system, int refinement);

// Spheres of radius base_radius centred at z_j / eta.
ResonatorSystem dilute_system(double base_radius, std::span<const Vec3> rescaled_centers,
                              double eta, Materials materials = {});

// Object File Format dump, for inspecting meshes in external viewers.
void write_off(const TriangleMesh& mesh, std::ostream& os);

}  // namespace reslab
