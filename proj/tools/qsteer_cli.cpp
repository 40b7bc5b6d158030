// qsteer: steering-inequality bounds and violation-curve scans.
//
// Subcommands:
//   bounds        -- bound chain (+ optional exact LHS) for a BasisSet file
//   mub           -- generate (optionally perturbed) prime-dimension MUB sets
//   multisinglet  -- k-copy singlet violation grid as CSV
//   photonic      -- photonic multi-particle violation scan as CSV
//
// Exit codes: 0 success, 2 input error, 3 capacity error, 1 internal error.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qsteer/qsteer.hpp>

namespace {

struct BoundsConfig {
  std::string input;
  std::string output;
  bool exact_lhs = false;
  std::uint64_t lhs_cap = 1000000;
  double toeplitz_tol = 1e-9;
  int workers = 0;
};

struct MubConfig {
  int dim = 0;
  std::string output;
  double perturb = 0.0;
  std::uint64_t seed = 0;
};

struct MultiSingletConfig {
  int k_max = 0;
  std::string eta = "1";
  double fidelity = 1.0;
  std::string epsilon = "0";
  double sigma = 0.0;
  std::string output;
};

struct PhotonicConfig {
  int d_max = 0;
  int n_max = 400;
  std::string eta = "1";
  bool emit_all_n = false;
  std::string output;
  int workers = 0;
};

void emit(const std::string& content, const std::string& output_path) {
  if (output_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  qsteer::write_text_file(output_path, content);
}

// Domain policy for numeric flags that accept grids: out-of-domain points of
// an explicit grid are dropped with a note (figure grids often brush the open
// end of a parameter's domain), while a scalar value out of domain is a hard
// error. An entirely filtered-out grid is also a hard error.
std::vector<double> filter_domain(const qsteer::GridSpec& spec, const std::string& flag,
                                  const std::string& domain_text,
                                  const std::function<bool(double)>& in_domain) {
  std::vector<double> values;
  for (const double v : spec.values) {
    if (in_domain(v)) {
      values.push_back(v);
      continue;
    }
    if (!spec.was_grid)
      throw qsteer::invalid_input_error(flag + ": value " + qsteer::csv_number(v) +
                                        " lies outside " + domain_text);
    std::fprintf(stderr, "note: %s: dropping grid point %s outside %s\n", flag.c_str(),
                 qsteer::csv_number(v).c_str(), domain_text.c_str());
  }
  if (values.empty())
    throw qsteer::invalid_input_error(flag + ": no grid points left within " + domain_text);
  return values;
}

int run_bounds(const BoundsConfig& cfg) {
  const qsteer::BasisSet bases = qsteer::load_basis_set(cfg.input);
  qsteer::BoundsOptions opt;
  opt.exact_lhs = cfg.exact_lhs;
  opt.lhs_cap = cfg.lhs_cap;
  opt.toeplitz_tol = cfg.toeplitz_tol;
  opt.workers = cfg.workers;
  const qsteer::SteeringBounds bounds = qsteer::compute_bounds(bases, opt);
  emit(qsteer::bounds_to_json(bounds).dump(2) + "\n", cfg.output);
  return 0;
}

int run_mub(const MubConfig& cfg) {
  qsteer::BasisSet bases = qsteer::generate_mub_prime(cfg.dim);
  if (cfg.perturb != 0.0) bases = qsteer::perturb_bases(bases, cfg.perturb, cfg.seed);
  qsteer::save_basis_set(bases, cfg.output);
  const qsteer::OverlapSummary summary = qsteer::overlap_summary(bases);
  const double c_max = summary.c_max.value();  // N = d + 1 >= 3 bases
  const double eps = qsteer::epsilon_of_overlap(c_max, bases.dim());
  std::printf("c_max = %.12g\nepsilon = %.12g\n", c_max, eps);
  return 0;
}

int run_multisinglet(const MultiSingletConfig& cfg) {
  const std::vector<double> etas =
      filter_domain(qsteer::parse_grid(cfg.eta), "--eta", "(0, 1]",
                    [](double v) { return v > 0.0 && v <= 1.0; });
  const std::vector<double> epsilons =
      filter_domain(qsteer::parse_grid(cfg.epsilon), "--epsilon", "[0, 1)",
                    [](double v) { return v >= 0.0 && v < 1.0; });
  const std::vector<qsteer::MultiSingletRow> rows =
      qsteer::multisinglet_grid(cfg.k_max, etas, cfg.fidelity, epsilons, cfg.sigma);
  emit(qsteer::multisinglet_csv(rows), cfg.output);
  return 0;
}

int run_photonic(const PhotonicConfig& cfg) {
  if (cfg.emit_all_n && cfg.output.empty())
    throw qsteer::invalid_input_error("--emit-all-n requires --output (the dump goes to "
                                      "<output stem>.all_n.csv)");
  const std::vector<double> etas =
      filter_domain(qsteer::parse_grid(cfg.eta), "--eta", "(0, 1]",
                    [](double v) { return v > 0.0 && v <= 1.0; });
  const std::vector<qsteer::PhotonicScanRow> rows =
      qsteer::photonic_scan_grid(cfg.d_max, cfg.n_max, etas, cfg.workers);
  emit(qsteer::photonic_csv(rows), cfg.output);
  if (cfg.emit_all_n) {
    std::string stem = cfg.output;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
      stem.resize(stem.size() - 4);
    const std::vector<qsteer::PhotonicAllNRow> all_rows =
        qsteer::photonic_all_n(cfg.d_max, cfg.n_max, cfg.workers);
    qsteer::write_text_file(stem + ".all_n.csv", qsteer::photonic_all_n_csv(all_rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsteer: quantum-steering inequality bounds and violation scans"};
  app.require_subcommand(1);
  app.footer(
      "Worker flags default to 0 = use the QSTEER_WORKERS environment variable\n"
      "(or 1 if unset). Results are byte-identical across worker counts.\n"
      "Grid-valued flags accept a scalar or an inclusive 'start:stop:step' range.");

  BoundsConfig bounds_cfg;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Compute the bound chain for a BasisSet JSON file");
  bounds->add_option("--input", bounds_cfg.input, "BasisSet JSON file")->required();
  bounds->add_option("--output", bounds_cfg.output,
                     "Write the JSON result here instead of stdout");
  bounds->add_flag("--exact-lhs", bounds_cfg.exact_lhs,
                   "Also compute the exact LHS bound by strategy enumeration");
  bounds->add_option("--lhs-cap", bounds_cfg.lhs_cap,
                     "Max number of deterministic strategies to enumerate")
      ->capture_default_str();
  bounds->add_option("--toeplitz-tol", bounds_cfg.toeplitz_tol,
                     "Elementwise tolerance for block-Toeplitz applicability")
      ->capture_default_str();
  bounds->add_option("--workers", bounds_cfg.workers, "Worker threads for --exact-lhs")
      ->capture_default_str();

  MubConfig mub_cfg;
  CLI::App* mub = app.add_subcommand(
      "mub", "Generate the d+1 mutually unbiased bases for prime d");
  mub->add_option("--dim", mub_cfg.dim, "Hilbert-space dimension (prime)")->required();
  mub->add_option("--output", mub_cfg.output, "BasisSet JSON output path")->required();
  mub->add_option("--perturb", mub_cfg.perturb,
                  "Unitary-perturbation strength delta in [0, 1]; 0 = exact MUBs")
      ->capture_default_str();
  mub->add_option("--seed", mub_cfg.seed, "RNG seed for --perturb")->capture_default_str();

  MultiSingletConfig ms_cfg;
  CLI::App* ms = app.add_subcommand(
      "multisinglet", "k-copy singlet violation grid, CSV rows sorted by (k, eta, epsilon)");
  ms->add_option("--k-max", ms_cfg.k_max, "Scan k = 1..k_max singlet copies")->required();
  ms->add_option("--eta", ms_cfg.eta, "Detection efficiency in (0, 1]; scalar or grid")
      ->capture_default_str();
  ms->add_option("--fidelity", ms_cfg.fidelity, "Singlet fidelity in (0, 1]")
      ->capture_default_str();
  ms->add_option("--epsilon", ms_cfg.epsilon,
                 "Measurement-error parameter in [0, 1); scalar or grid")
      ->capture_default_str();
  ms->add_option("--sigma", ms_cfg.sigma, "Settings-thinning exponent in [0, 1)")
      ->capture_default_str();
  ms->add_option("--output", ms_cfg.output, "CSV output path (default: stdout)");

  PhotonicConfig ph_cfg;
  CLI::App* ph = app.add_subcommand(
      "photonic", "Photonic multi-particle violation scan, CSV rows sorted by (d, eta)");
  ph->add_option("--d-max", ph_cfg.d_max, "Scan photon numbers d = 1..d_max")->required();
  ph->add_option("--n-max", ph_cfg.n_max, "Largest settings count N in the per-d scan")
      ->capture_default_str();
  ph->add_option("--eta", ph_cfg.eta, "Detection efficiency in (0, 1]; scalar or grid")
      ->capture_default_str();
  ph->add_flag("--emit-all-n", ph_cfg.emit_all_n,
               "Also dump V_Q(N) for every scanned N to <output stem>.all_n.csv");
  ph->add_option("--output", ph_cfg.output, "CSV output path (default: stdout)");
  ph->add_option("--workers", ph_cfg.workers, "Worker threads for the per-d scan")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag/usage problems are input errors
  }

  try {
    if (bounds->parsed()) return run_bounds(bounds_cfg);
    if (mub->parsed()) return run_mub(mub_cfg);
    if (ms->parsed()) return run_multisinglet(ms_cfg);
    return run_photonic(ph_cfg);
  } catch (const qsteer::capacity_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const qsteer::invalid_input_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
