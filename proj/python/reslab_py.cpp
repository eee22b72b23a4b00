#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "reslab/capacitance.hpp"
#include "reslab/errors.hpp"
#include "reslab/hamiltonian.hpp"
#include "reslab/hill_floquet.hpp"
#include "reslab/tightbinding.hpp"

namespace py = pybind11;
using namespace reslab;

namespace {

std::vector<Vec3> to_points(const Eigen::MatrixXd& xyz) {
  if (xyz.cols() != 3) throw InputError("expected an (N, 3) array of points");
  std::vector<Vec3> out;
  for (Eigen::Index i = 0; i < xyz.rows(); ++i) out.emplace_back(xyz.row(i).transpose());
  return out;
}

ResonatorSystem make_system(const Eigen::MatrixXd& centers, const Eigen::VectorXd& radii,
                            const Materials& materials) {
  const auto pts = to_points(centers);
  if (radii.size() != static_cast<Eigen::Index>(pts.size()))
    throw InputError("one radius per center is required");
  std::vector<Sphere> spheres;
  for (std::size_t i = 0; i < pts.size(); ++i) spheres.push_back({pts[i], radii[static_cast<Eigen::Index>(i)]});
  return ResonatorSystem(spheres, materials);
}

}  // namespace

PYBIND11_MODULE(_reslab, m) {
  m.doc() = "Capacitance matrices, Hill/Floquet analysis, Hermitian Hamiltonians and tight-binding "
            "models for systems of subwavelength resonators.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Materials>(m, "Materials")
      .def(py::init([](double delta, double kappa_r, double rho_r) { return Materials{delta, kappa_r, rho_r}; }),
           py::arg("delta") = 1e-3, py::arg("kappa_r") = 1.0, py::arg("rho_r") = 1.0)
      .def_readwrite("delta", &Materials::delta)
      .def_readwrite("kappa_r", &Materials::kappa_r)
      .def_readwrite("rho_r", &Materials::rho_r);

  m.def("capacitance_matrix",
        [](const Eigen::MatrixXd& centers, const Eigen::VectorXd& radii, int refinement) {
          return capacitance_matrix(make_system(centers, radii, {}), refinement).entries;
        },
        py::arg("centers"), py::arg("radii"), py::arg("refinement") = 2,
        "Boundary element capacitance matrix of disjoint spheres.");
  m.def("dilute_capacitance",
        [](const Eigen::MatrixXd& z, double eta, double capB) {
          return dilute_capacitance(to_points(z), eta, capB).entries;
        },
        py::arg("rescaled_centers"), py::arg("eta"), py::arg("capB"));
  m.def("cap_B", &cap_B, py::arg("radius"));
  m.def("cap_B_bem", &cap_B_bem, py::arg("radius"), py::arg("refinement"));

  m.def("generalised_capacitance",
        [](const Eigen::MatrixXd& c, const Eigen::VectorXd& volumes, const Materials& mat) {
          const HillCoefficient h(c, ModulationProfile::static_profile(static_cast<std::size_t>(c.rows()), 1.0),
                                  mat, volumes);
          return h.static_matrix();
        },
        py::arg("capacitance"), py::arg("volumes"), py::arg("materials") = Materials{},
        "M0_ij = delta kappa_r C_ij / (rho_r |D_i|).");
  m.def("static_spectrum", &static_spectrum, py::arg("m0"));
  m.def("sqrt_spd", &sqrt_spd, py::arg("m"));
  m.def("static_hamiltonian", [](const Eigen::MatrixXd& m0) { return static_hamiltonian(m0).h0; },
        py::arg("m0"));

  m.def("quasifrequencies",
        [](const std::function<Eigen::MatrixXd(double)>& m_of_t, int n, double omega, double tol) {
          OdeOptions opt;
          opt.tol = tol;
          const double period = 2.0 * std::numbers::pi / omega;
          const Monodromy mono = monodromy(m_of_t, static_cast<std::size_t>(n), period, opt);
          const Quasifrequencies q = quasifrequencies(mono, omega);
          return py::make_tuple(q.values, mono.determinant_error);
        },
        py::arg("m"), py::arg("n"), py::arg("omega"), py::arg("tol") = 1e-9,
        "Floquet quasifrequencies of psi'' + M(t) psi = 0 and |det(monodromy) - 1|.");

  m.def("hamiltonian_sweep",
        [](const Eigen::MatrixXd& m0, const std::function<Eigen::MatrixXd(double)>& m1, double omega,
           const std::vector<double>& epsilons, int grid) {
          const double period = 2.0 * std::numbers::pi / omega;
          const TransformTrajectory tr = solve_transform(m0, m1, period, {1e-10, grid});
          std::vector<double> herm, diag;
          for (double e : epsilons) {
            const HamiltonianTrajectory h = hamiltonian_trajectory(m0, m1, tr, e);
            herm.push_back(h.hermitian_residual());
            diag.push_back(h.max_diagonal());
          }
          return py::make_tuple(herm, diag);
        },
        py::arg("m0"), py::arg("m1"), py::arg("omega"), py::arg("epsilons"), py::arg("grid") = 1024,
        "sup_t |H - H^H| and sup_t max |H_jj| for each epsilon.");

  m.def("tb_spectrum",
        [](const Eigen::MatrixXd& z, double eta, double capB, double volume, const Materials& mat) {
          return tb_spectrum(build_model({mat, volume, capB}, to_points(z), eta));
        },
        py::arg("rescaled_centers"), py::arg("eta"), py::arg("capB"), py::arg("volume"),
        py::arg("materials") = Materials{});
  m.def("nearest_neighbour_ratio",
        [](const Eigen::MatrixXd& z, double eta, double capB, double volume, const Materials& mat) {
          const auto pts = to_points(z);
          const TightBindingModel model = build_model({mat, volume, capB}, pts, eta);
          return nearest_neighbour_truncation(model, nearest_neighbours(pts)).ratio;
        },
        py::arg("rescaled_centers"), py::arg("eta"), py::arg("capB"), py::arg("volume"),
        py::arg("materials") = Materials{});
}
