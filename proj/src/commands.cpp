#include "reslab/commands.hpp"

#include <fstream>
#include <numbers>
#include <ostream>

#include "reslab/capacitance.hpp"
#include "reslab/csv.hpp"
#include "reslab/hamiltonian.hpp"
#include "reslab/hill_floquet.hpp"
#include "reslab/tightbinding.hpp"

namespace reslab {

namespace fs = std::filesystem;

namespace {

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InputError("cannot create output directory " + dir_.string());
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw InputError("cannot write " + (dir_ / name).string());
    written_.push_back(name);
    return os;
  }

  std::vector<std::string> written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

CapacitanceMatrix bem(const ResonatorSystem& system, const NumericsConfig& n) {
  return capacitance_matrix(system, n.refinement, n.max_raw_asymmetry);
}

double reference_capB(const ExperimentConfig& cfg, double radius) {
  return cfg.numerics.bem_capB ? cap_B_bem(radius, cfg.numerics.refinement) : cap_B(radius);
}

const ModulationProfile& require_modulation(const ExperimentConfig& cfg, const char* command) {
  if (!cfg.modulation)
    throw ConfigError(std::string(command) + " requires a \"modulation\" block with \"omega\"");
  return *cfg.modulation;
}

void plot_script(OutputDir& out, const std::string& name, const std::string& body) {
  auto os = out.open(name);
  os << "# Companion plotting template; adjust to taste.\n"
        "import pandas as pd\nimport matplotlib.pyplot as plt\n\n"
     << body;
}

void write_complex_trajectory(std::ostream& os, const std::vector<double>& t,
                              const std::vector<Eigen::MatrixXcd>& xs) {
  const auto dim = xs.empty() ? 0 : xs.front().rows();
  std::vector<std::string> header{"t"};
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const std::string rc = std::to_string(r) + "_" + std::to_string(c);
      header.push_back("re_" + rc);
      header.push_back("im_" + rc);
    }
  }
  write_row(os, header);
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::vector<double> row{t[k]};
    const auto flat = flatten_complex(xs[k]);
    row.insert(row.end(), flat.begin(), flat.end());
    write_row(os, row);
  }
}

}  // namespace

std::vector<std::string> cmd_capmat(const ExperimentConfig& cfg, const CommandOptions& options,
                                    std::ostream& log) {
  OutputDir out(options.out_dir);
  const ResonatorSystem system = cfg.system();
  const CapacitanceMatrix c = bem(system, cfg.numerics);
  {
    auto os = out.open("capacitance.csv");
    write_capacitance_csv(c, os);
  }
  log << "capacitance: N=" << c.size() << " refinement=" << c.refinement
      << " C_00=" << fmt(c.entries(0, 0)) << " residual=" << fmt(c.residual) << "\n";

  if (options.sweep_refinement) {
    auto os = out.open("convergence.csv");
    write_row(os, {"refinement", "panels", "c00", "max_abs_change"});
    Eigen::MatrixXd previous;
    for (int r : cfg.numerics.refinement_sweep) {
      const CapacitanceMatrix cr = capacitance_matrix(system, r, cfg.numerics.max_raw_asymmetry);
      const double change =
          previous.size() ? (cr.entries - previous).cwiseAbs().maxCoeff() : std::nan("");
      write_row(os, {std::to_string(r), std::to_string(20 * system.size() << (2 * r)),
                     fmt(cr.entries(0, 0)), fmt(change)});
      previous = cr.entries;
    }
  }

  if (options.dilute) {
    if (!cfg.dilute) throw ConfigError("--dilute requires a \"geometry.dilute\" block");
    const double capB = reference_capB(cfg, cfg.dilute->base_radius);
    const CapacitanceMatrix d = dilute_capacitance(cfg.dilute->centers, cfg.dilute->eta, capB);
    const double max_diff = (c.entries - d.entries).cwiseAbs().maxCoeff();
    auto os = out.open("dilute.csv");
    write_row(os, {"i", "j", "bem", "dilute", "abs_diff", "max_diff"});
    for (Eigen::Index i = 0; i < c.entries.rows(); ++i)
      for (Eigen::Index j = 0; j < c.entries.cols(); ++j)
        write_row(os, {std::to_string(i), std::to_string(j), fmt(c.entries(i, j)),
                       fmt(d.entries(i, j)), fmt(std::abs(c.entries(i, j) - d.entries(i, j))),
                       fmt(max_diff)});
    log << "dilute: eta=" << fmt(cfg.dilute->eta) << " max|C_bem - C_dilute|=" << fmt(max_diff)
        << "\n";
  }

  if (options.export_mesh) {
    auto os = out.open("mesh.off");
    write_off(mesh_system(system, cfg.numerics.refinement), os);
  }
  if (options.plot_script)
    plot_script(out, "plot_capmat.py",
                "df = pd.read_csv('convergence.csv')\n"
                "plt.semilogy(df.refinement, df.max_abs_change, 'o-')\n"
                "plt.xlabel('refinement'); plt.ylabel('max |change|'); plt.show()\n");
  return out.written();
}

std::vector<std::string> cmd_floquet(const ExperimentConfig& cfg, const CommandOptions& options,
                                     std::ostream& log) {
  const ModulationProfile& profile = require_modulation(cfg, "floquet");
  OutputDir out(options.out_dir);
  const ResonatorSystem system = cfg.system();
  const HillCoefficient base(bem(system, cfg.numerics), profile, system);

  std::vector<double> epsilons{profile.epsilon};
  if (options.epsilon_sweep) epsilons = cfg.numerics.epsilon_sweep;

  {
    auto os = out.open("static_spectrum.csv");
    write_row(os, {"index", "value", "folded"});
    const Eigen::VectorXd s = static_spectrum(base.static_matrix());
    for (Eigen::Index k = 0; k < s.size(); ++k)
      write_row(os, {std::to_string(k), fmt(s[k]), fmt(fold(s[k], profile.omega))});
  }

  auto os = out.open("quasifrequencies.csv");
  write_row(os, {"epsilon", "index", "re_omega", "im_omega", "abs_mu", "det_error"});
  for (double eps : epsilons) {
    const HillCoefficient coeff = base.with_epsilon(eps);
    const Monodromy mono = monodromy(coeff, cfg.numerics.tol, cfg.numerics.det_tol);
    const Quasifrequencies q = quasifrequencies(mono, profile.omega);
    for (Eigen::Index k = 0; k < q.values.size(); ++k)
      write_row(os, {fmt(eps), std::to_string(k), fmt(q.values[k].real()), fmt(q.values[k].imag()),
                     fmt(std::abs(q.multipliers[k])), fmt(mono.determinant_error)});
    log << "floquet: epsilon=" << fmt(eps) << " |det-1|=" << fmt(mono.determinant_error)
        << (q.defective ? " (defective monodromy)" : "") << "\n";
  }
  if (options.plot_script)
    plot_script(out, "plot_floquet.py",
                "df = pd.read_csv('quasifrequencies.csv')\n"
                "for i, g in df.groupby('index'):\n"
                "    plt.plot(g.epsilon, g.re_omega, 'o-', label=f'branch {i}')\n"
                "plt.xlabel('epsilon'); plt.ylabel('Re omega'); plt.legend(); plt.show()\n");
  return out.written();
}

std::vector<std::string> cmd_hamiltonian(const ExperimentConfig& cfg,
                                         const CommandOptions& options, std::ostream& log) {
  OutputDir out(options.out_dir);
  const ResonatorSystem system = cfg.system();
  system.require_equal_radii();
  const CapacitanceMatrix c = bem(system, cfg.numerics);
  const double omega = cfg.modulation ? cfg.modulation->omega : 1.0;
  const ModulationProfile profile =
      cfg.modulation ? *cfg.modulation : ModulationProfile::static_profile(system.size(), omega);
  const HillCoefficient base(c, profile, system);
  const Eigen::MatrixXd m0 = base.static_matrix();
  const StaticHamiltonian stat = static_hamiltonian(m0);
  {
    auto os = out.open("h0.csv");
    os << "# H0 " << 2 * stat.size() << "x" << 2 * stat.size() << "\n";
    write_matrix_rows(os, stat.h0);
  }
  log << "hamiltonian: N=" << stat.size() << " static H0 written\n";
  if (!cfg.modulation) return out.written();

  TransformOptions topt;
  topt.tol = cfg.numerics.transform_tol;
  topt.grid = cfg.numerics.grid;

  double eps = profile.epsilon;
  if (eps == 0.0) eps = cfg.numerics.epsilon_sweep.front();
  const SplitM split = split_M(base.with_epsilon(eps));
  const TransformTrajectory tr = solve_transform(split.m0, split.m1, base.period(), topt);
  const HamiltonianTrajectory ham = hamiltonian_trajectory(split.m0, split.m1, tr, eps);
  {
    std::vector<Eigen::MatrixXcd> t1;
    for (const auto& x : tr.t1) t1.push_back(tr.to_original(x));
    auto os = out.open("t1.csv");
    write_complex_trajectory(os, tr.t, t1);
  }
  {
    auto os = out.open("h.csv");
    write_complex_trajectory(os, ham.t, ham.h);
  }
  log << "hamiltonian: epsilon=" << fmt(eps) << " sup|T1|=" << fmt(tr.max_norm()) << "\n";

  {
    auto os = out.open("hermitian_sweep.csv");
    write_row(os, {"epsilon", "hermitian_residual", "max_diagonal", "diagonal_constant",
                   "reconstruction_error"});
    std::vector<double> es, herm, recon;
    for (double e : cfg.numerics.epsilon_sweep) {
      if (e == 0.0) continue;
      const SplitM s = split_M(base.with_epsilon(e));
      const TransformTrajectory te = solve_transform(s.m0, s.m1, base.period(), topt);
      const HamiltonianTrajectory he = hamiltonian_trajectory(s.m0, s.m1, te, e);
      const Reconstruction rec = reconstruct_M(te, he, e);
      double err = 0.0;
      for (std::size_t k = 0; k < rec.t.size(); ++k)
        err = std::max(err, (rec.m[k] - (s.m0 + e * s.m1(rec.t[k]))).norm());
      write_row(os, {fmt(e), fmt(he.hermitian_residual()), fmt(he.max_diagonal()),
                     fmt(he.max_diagonal() / (e * e)), fmt(err)});
      es.push_back(e);
      herm.push_back(he.hermitian_residual());
      recon.push_back(err);
    }
    if (es.size() >= 2) {
      auto ss = out.open("hermitian_slope.csv");
      write_row(ss, std::vector<std::string>{"quantity", "slope"});
      const double hs = loglog_slope(es, herm), rs = loglog_slope(es, recon);
      write_row(ss, {"hermitian_residual", fmt(hs)});
      write_row(ss, {"reconstruction_error", fmt(rs)});
      log << "hamiltonian: hermitian residual slope=" << fmt(hs) << "\n";
    }
  }

  if (system.size() == 1) {
    const OneResonatorResiduals r = one_resonator_residuals(tr, ham, split.m1);
    auto os = out.open("one_resonator_residuals.csv");
    write_row(os, std::vector<std::string>{"equation", "residual"});
    write_row(os, {"a", fmt(r.a)});
    write_row(os, {"h", fmt(r.h)});
    write_row(os, {"c", fmt(r.c)});
    write_row(os, {"d", fmt(r.d)});
    write_row(os, {"h1_form", fmt(r.h1_form)});
    log << "hamiltonian: one-resonator residual max=" << fmt(r.max()) << "\n";
  }
  if (options.plot_script)
    plot_script(out, "plot_hamiltonian.py",
                "df = pd.read_csv('hermitian_sweep.csv')\n"
                "plt.loglog(df.epsilon, df.hermitian_residual, 'o-')\n"
                "plt.xlabel('epsilon'); plt.ylabel('sup |H - H^H|'); plt.show()\n");
  return out.written();
}

std::vector<std::string> cmd_tightbinding(const ExperimentConfig& cfg,
                                          const CommandOptions& options, std::ostream& log) {
  if (!cfg.dilute) throw ConfigError("tightbinding requires a \"geometry.dilute\" block");
  OutputDir out(options.out_dir);
  const DiluteSpec& d = *cfg.dilute;
  TightBindingParams params;
  params.materials = cfg.materials;
  params.volume = Sphere{Vec3::Zero(), d.base_radius}.volume();
  params.capB = reference_capB(cfg, d.base_radius);
  const Adjacency adjacency = cfg.adjacency ? *cfg.adjacency : nearest_neighbours(d.centers);

  {
    const TightBindingModel model = build_model(params, d.centers, d.eta);
    auto os = out.open("tb_model.csv");
    os << "# lambda0=" << fmt(model.lambda0) << " eta=" << fmt(model.eta)
       << " capB=" << fmt(params.capB) << "\n";
    write_matrix_rows(os, model.approximant());
    auto is = out.open("interaction.csv");
    write_matrix_rows(is, model.interaction.a);
    log << "tightbinding: N=" << model.size() << " lambda0=" << fmt(model.lambda0) << "\n";
  }

  auto spectra = out.open("spectra.csv");
  write_row(spectra, {"eta", "lambda_index", "tb_value", "full_value", "mismatch"});
  auto nn = out.open("nearest_neighbour.csv");
  write_row(nn, std::vector<std::string>{"eta", "R"});
  std::vector<double> etas, mismatch;
  for (double eta : cfg.numerics.eta_sweep) {
    const TightBindingModel model = build_model(params, d.centers, eta);
    const ResonatorSystem system = cfg.system_at(eta);
    const HillCoefficient coeff(bem(system, cfg.numerics),
                                ModulationProfile::static_profile(system.size(), 1.0), system);
    const SpectrumComparison cmp = compare_spectrum(model, coeff.static_matrix());
    for (Eigen::Index k = 0; k < cmp.tb.size(); ++k)
      write_row(spectra, {fmt(eta), std::to_string(k), fmt(cmp.tb[k]), fmt(cmp.full[k]),
                          fmt(std::abs(cmp.tb[k] - cmp.full[k]))});
    const TruncationReport tr = nearest_neighbour_truncation(model, adjacency);
    write_row(nn, {fmt(eta), fmt(tr.ratio)});
    log << "tightbinding: eta=" << fmt(eta) << " mismatch=" << fmt(cmp.mismatch)
        << " R=" << fmt(tr.ratio) << "\n";
    etas.push_back(eta);
    mismatch.push_back(cmp.mismatch);
  }
  if (etas.size() >= 2) {
    auto os = out.open("spectra_slope.csv");
    write_row(os, std::vector<std::string>{"quantity", "slope"});
    const double s = loglog_slope(etas, mismatch);
    write_row(os, {"mismatch", fmt(s)});
    log << "tightbinding: mismatch slope=" << fmt(s) << "\n";
  }
  if (options.plot_script)
    plot_script(out, "plot_tightbinding.py",
                "df = pd.read_csv('spectra.csv').groupby('eta').mismatch.max()\n"
                "plt.loglog(df.index, df.values, 'o-')\n"
                "plt.xlabel('eta'); plt.ylabel('max mismatch'); plt.show()\n");
  return out.written();
}

}  // namespace reslab
