#include "reslab/geometry.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "reslab/errors.hpp"

namespace reslab {

double Sphere::volume() const { return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius; }
double Sphere::area() const { return 4.0 * std::numbers::pi * radius * radius; }

ResonatorSystem::ResonatorSystem(std::vector<Sphere> spheres, Materials materials)
    : spheres_(std::move(spheres)), materials_(materials) {
  if (spheres_.empty()) throw InputError("resonator system needs at least one sphere");
  for (std::size_t i = 0; i < spheres_.size(); ++i) {
    const auto& s = spheres_[i];
    if (!(s.radius > 0.0) || !std::isfinite(s.radius))
      throw InputError("sphere " + std::to_string(i) + ": radius must be positive");
    if (!s.center.allFinite()) throw InputError("sphere " + std::to_string(i) + ": non-finite center");
  }
  for (std::size_t i = 0; i < spheres_.size(); ++i) {
    for (std::size_t j = i + 1; j < spheres_.size(); ++j) {
      const double d = (spheres_[i].center - spheres_[j].center).norm();
      if (!(d > spheres_[i].radius + spheres_[j].radius)) {
        std::ostringstream msg;
        msg << "spheres " << i << " and " << j << " overlap (distance " << d << ", radii "
            << spheres_[i].radius << " + " << spheres_[j].radius << ")";
        throw InputError(msg.str());
      }
    }
  }
  if (!(materials_.delta > 0) || !(materials_.kappa_r > 0) || !(materials_.rho_r > 0))
    throw InputError("material constants delta, kappa_r, rho_r must be positive");
}

Eigen::VectorXd ResonatorSystem::volumes() const {
  Eigen::VectorXd v(spheres_.size());
  for (std::size_t i = 0; i < spheres_.size(); ++i) v[i] = spheres_[i].volume();
  return v;
}

bool ResonatorSystem::equal_radii(double rel_tol) const {
  const double r0 = spheres_.front().radius;
  for (const auto& s : spheres_)
    if (std::abs(s.radius - r0) > rel_tol * r0) return false;
  return true;
}

void ResonatorSystem::require_equal_radii() const {
  if (!equal_radii()) throw InputError("resonators must all have the same radius");
}

Vec3 TriangleMesh::centroid(std::size_t p) const {
  return (vertex(p, 0) + vertex(p, 1) + vertex(p, 2)) / 3.0;
}

double TriangleMesh::area(std::size_t p) const {
  return 0.5 * (vertex(p, 1) - vertex(p, 0)).cross(vertex(p, 2) - vertex(p, 0)).norm();
}

double TriangleMesh::diameter(std::size_t p) const {
  const Vec3 a = vertex(p, 0), b = vertex(p, 1), c = vertex(p, 2);
  return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

double TriangleMesh::total_area(int resonator) const {
  double sum = 0.0;
  for (std::size_t p = 0; p < panel_count(); ++p)
    if (panel_resonator[p] == resonator) sum += area(p);
  return sum;
}

int TriangleMesh::resonator_count() const {
  int n = 0;
  for (int r : panel_resonator) n = std::max(n, r + 1);
  return n;
}

namespace {

// Unit icosphere; vertices on the unit sphere.
TriangleMesh unit_icosphere(int refinement) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int idx = static_cast<int>(m.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& t : m.triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  m.panel_resonator.assign(m.triangles.size(), 0);
  return m;
}

}  // namespace

TriangleMesh mesh_sphere(const Sphere& sphere, int refinement) {
  if (refinement < 0) throw InputError("refinement must be non-negative");
  if (!(sphere.radius > 0)) throw InputError("sphere radius must be positive");
  TriangleMesh m = unit_icosphere(refinement);
  for (auto& v : m.vertices) v = sphere.center + sphere.radius * v;
  return m;
}

TriangleMesh mesh_system(const ResonatorSystem& system, int refinement) {
  TriangleMesh out;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const TriangleMesh part = mesh_sphere(system.sphere(i), refinement);
    const int offset = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
    for (const auto& t : part.triangles) {
      out.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
      out.panel_resonator.push_back(static_cast<int>(i));
    }
  }
  return out;
}

ResonatorSystem dilute_system(double base_radius, std::span<const Vec3> rescaled_centers,
                              double eta, Materials materials) {
  if (!(eta > 0.0 && eta < 1.0)) throw InputError("eta must lie in (0, 1)");
  std::vector<Sphere> spheres;
  spheres.reserve(rescaled_centers.size());
  for (const auto& z : rescaled_centers) spheres.push_back({z / eta, base_radius});
  return ResonatorSystem(std::move(spheres), materials);
}

void write_off(const TriangleMesh& mesh, std::ostream& os) {
  os << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) os << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace reslab
