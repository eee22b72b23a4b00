#include "reslab/capacitance.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "reslab/csv.hpp"
#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

namespace {

constexpr double kInvFourPi = 1.0 / (4.0 * std::numbers::pi);
constexpr double kMaxCondition = 1e12;

}  // namespace

double triangle_potential(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x) {
  const Vec3 cross = (b - a).cross(c - a);
  const double twice_area = cross.norm();
  if (!(twice_area > 0.0)) throw InputError("degenerate triangle");
  const Vec3 n = cross / twice_area;
  const double h = n.dot(x - a);
  const double abs_h = std::abs(h);
  const Vec3 rho = x - h * n;

  const Vec3* verts[3] = {&a, &b, &c};
  double sum = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec3& p = *verts[e];
    const Vec3& q = *verts[(e + 1) % 3];
    const Vec3 edge = q - p;
    const Vec3 l = edge.normalized();
    const Vec3 u = l.cross(n);
    const double t0 = (p - rho).dot(u);
    const double s_plus = (q - rho).dot(l);
    const double s_minus = (p - rho).dot(l);
    const double r_plus = (x - q).norm();
    const double r_minus = (x - p).norm();
    const double r0_sq = t0 * t0 + h * h;

    // x on the edge's supporting line contributes nothing.
    if (std::abs(t0) > 1e-14 * edge.norm()) {
      sum += t0 * std::log((r_plus + s_plus) / (r_minus + s_minus));
    }
    if (abs_h > 0.0) {
      sum -= abs_h * (std::atan2(t0 * s_plus, r0_sq + abs_h * r_plus) -
                      std::atan2(t0 * s_minus, r0_sq + abs_h * r_minus));
    }
  }
  return sum;
}

DenseOperator assemble_single_layer(const TriangleMesh& mesh) {
  const std::size_t n = mesh.panel_count();
  std::vector<Vec3> centroid(n);
  std::vector<std::array<Vec3, 3>> gauss(n);
  std::vector<double> area(n);
  for (std::size_t q = 0; q < n; ++q) {
    area[q] = mesh.area(q);
    if (!(area[q] > 0.0)) throw InputError("degenerate panel " + std::to_string(q));
    centroid[q] = mesh.centroid(q);
    const Vec3 a = mesh.vertex(q, 0), b = mesh.vertex(q, 1), c = mesh.vertex(q, 2);
    // Three-point rule, barycentric (2/3, 1/6, 1/6) and permutations.
    gauss[q] = {(4.0 * a + b + c) / 6.0, (a + 4.0 * b + c) / 6.0, (a + b + 4.0 * c) / 6.0};
  }

  DenseOperator op{Eigen::MatrixXd(n, n)};
  parallel_for(n, [&](std::size_t p) {
    const Vec3& x = centroid[p];
    for (std::size_t q = 0; q < n; ++q) {
      double integral;
      if (q == p) {
        integral = triangle_potential(mesh.vertex(q, 0), mesh.vertex(q, 1), mesh.vertex(q, 2), x);
      } else {
        const auto& g = gauss[q];
        integral = area[q] / 3.0 *
                   (1.0 / (x - g[0]).norm() + 1.0 / (x - g[1]).norm() + 1.0 / (x - g[2]).norm());
      }
      op.entries(p, q) = -kInvFourPi * integral;
    }
  });
  return op;
}

namespace {

Eigen::MatrixXd indicator_columns(const TriangleMesh& mesh, int resonators) {
  Eigen::MatrixXd chi = Eigen::MatrixXd::Zero(mesh.panel_count(), resonators);
  for (std::size_t p = 0; p < mesh.panel_count(); ++p) chi(p, mesh.panel_resonator[p]) = 1.0;
  return chi;
}

Eigen::PartialPivLU<Eigen::MatrixXd> factorize(const DenseOperator& op) {
  if (op.entries.rows() != op.entries.cols() || op.entries.rows() == 0)
    throw InputError("single layer operator must be square and non-empty");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(op.entries);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kMaxCondition)) {
    std::ostringstream msg;
    msg << "single layer system is singular or ill-conditioned (condition estimate "
        << (rcond > 0 ? 1.0 / rcond : INFINITY) << ")";
    throw NumericalError(msg.str());
  }
  return lu;
}

}  // namespace

Density solve_density(const DenseOperator& op, const TriangleMesh& mesh, int resonator) {
  const int n_res = mesh.resonator_count();
  if (resonator < 0 || resonator >= n_res)
    throw InputError("resonator index " + std::to_string(resonator) + " out of range");
  if (static_cast<std::size_t>(op.entries.rows()) != mesh.panel_count())
    throw InputError("operator and mesh sizes differ");
  const auto lu = factorize(op);
  const Eigen::VectorXd chi = indicator_columns(mesh, n_res).col(resonator);
  Density d;
  d.resonator_index = resonator;
  d.panel_values = lu.solve(chi);
  d.residual = (op.entries * d.panel_values - chi).cwiseAbs().maxCoeff();
  return d;
}

CapacitanceMatrix capacitance_matrix(const ResonatorSystem& system, int refinement,
                                     double max_raw_asymmetry) {
  const TriangleMesh mesh = mesh_system(system, refinement);
  const DenseOperator op = assemble_single_layer(mesh);
  const auto lu = factorize(op);
  const int n = static_cast<int>(system.size());
  const Eigen::MatrixXd chi = indicator_columns(mesh, n);

  // Right-hand sides are independent; one column per task.
  Eigen::MatrixXd psi(mesh.panel_count(), n);
  Eigen::VectorXd residual(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    Eigen::VectorXd col = lu.solve(chi.col(static_cast<Eigen::Index>(j)));
    residual[j] = (op.entries * col - chi.col(static_cast<Eigen::Index>(j))).cwiseAbs().maxCoeff();
    psi.col(static_cast<Eigen::Index>(j)) = col;
  });

  Eigen::VectorXd area(mesh.panel_count());
  for (std::size_t p = 0; p < mesh.panel_count(); ++p) area[p] = mesh.area(p);

  CapacitanceMatrix out;
  out.refinement = refinement;
  out.residual = residual.maxCoeff();
  out.entries = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < mesh.panel_count(); ++p)
    out.entries.row(mesh.panel_resonator[p]) -= area[p] * psi.row(p);

  const double scale = out.entries.cwiseAbs().maxCoeff();
  out.raw_asymmetry = (out.entries - out.entries.transpose()).cwiseAbs().maxCoeff() / scale;
  if (out.raw_asymmetry > max_raw_asymmetry) {
    std::ostringstream msg;
    msg << "capacitance matrix asymmetry " << out.raw_asymmetry << " exceeds "
        << max_raw_asymmetry << "; refine the mesh";
    throw NumericalError(msg.str());
  }
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

double cap_B(double radius) {
  if (!(radius > 0)) throw InputError("radius must be positive");
  return 4.0 * std::numbers::pi * radius;
}

double cap_B_bem(double radius, int refinement) {
  const ResonatorSystem single({Sphere{Vec3::Zero(), radius}}, Materials{});
  return capacitance_matrix(single, refinement).entries(0, 0);
}

CapacitanceMatrix dilute_capacitance(std::span<const Vec3> z, double eta, double capB) {
  if (!(eta > 0.0 && eta < 1.0)) throw InputError("eta must lie in (0, 1)");
  if (z.empty()) throw InputError("at least one resonator centre is required");
  const auto n = static_cast<Eigen::Index>(z.size());
  CapacitanceMatrix out;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.entries(i, i) = capB;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (z[i] - z[j]).norm();
      if (!(d > 0.0)) throw InputError("coincident resonator centres " + std::to_string(i) +
                                       " and " + std::to_string(j));
      out.entries(i, j) = -eta * capB * capB / (4.0 * std::numbers::pi * d);
    }
  }
  return out;
}

void write_capacitance_csv(const CapacitanceMatrix& c, std::ostream& os) {
  os << "# capacitance N=" << c.size() << " refinement=" << c.refinement << '\n';
  write_matrix_rows(os, c.entries);
}

CapacitanceMatrix read_capacitance_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InputError("empty capacitance CSV");
  long n = -1;
  int refinement = -1;
  if (std::sscanf(header.c_str(), "# capacitance N=%ld refinement=%d", &n, &refinement) != 2 ||
      n <= 0)
    throw InputError("bad capacitance CSV header: " + header);
  CapacitanceMatrix c;
  c.refinement = refinement;
  c.entries = read_matrix_rows(is, n, n);
  return c;
}

}  // namespace reslab
