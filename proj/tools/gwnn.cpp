// gwnn: command-line front end for basis building, training, sweeps,
// analyses and benchmarks. Every command ends with key=value lines.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gwnn/basis.hpp"
#include "gwnn/bench.hpp"
#include "gwnn/dataset.hpp"
#include "gwnn/errors.hpp"
#include "gwnn/experiment.hpp"
#include "gwnn/locality.hpp"
#include "gwnn/model.hpp"
#include "gwnn/parallel.hpp"
#include "gwnn/sparsity.hpp"
#include "gwnn/spectral.hpp"

namespace fs = std::filesystem;
using namespace gwnn;

namespace {

struct DataArgs {
  std::string dir;
  std::string split_mode = "first";
  std::uint64_t split_seed = 0;
  bool allow_isolated = false;
};

struct BasisArgs {
  std::string cache;  // --basis <file>; overrides the build flags
  std::string method = "cheb";
  double s = 1.0;
  double t = 1e-4;
  std::size_t m = kDefaultChebOrder;
  bool swap_kernel = false;
  std::string lambda_max = "analytic";
  std::size_t block = 64;
  std::size_t eigen_cap = kDefaultEigenCap;
};

struct Options {
  std::size_t threads = 1;
  DataArgs data;
  BasisArgs basis;
  ModelConfig model;
  TrainConfig train;
  std::string out;
  std::string report;
  std::string checkpoint;
  std::string history;
  bool fourier = false;
  // sweep
  std::vector<double> s_grid{0.5, 1.0};
  std::vector<double> t_grid{1e-4};
  bool fresh_seed = false;
  // analyze
  std::size_t feature = 0;
  std::size_t k = 10;
  std::size_t node = 0;
  // bench
  std::vector<std::size_t> sizes{200, 2000, 20000};
  std::vector<std::size_t> exact_sizes{100, 200, 400, 800};
  std::size_t edges_per_node = 5;
  std::size_t columns = 8;
  std::size_t repeat = 3;
  std::size_t bench_order = kDefaultChebOrder;
  bool skip_exact = false;
};

void add_data_options(CLI::App* sub, DataArgs& d) {
  sub->add_option("--data", d.dir, "Dataset directory (edges/features/labels/splits .tsv)")
      ->required()
      ->envname("GWNN_DATA")
      ->check(CLI::ExistingDirectory);
  sub->add_option("--split-mode", d.split_mode, "Split when splits.tsv is absent")
      ->check(CLI::IsMember({"first", "random"}))
      ->capture_default_str();
  sub->add_option("--split-seed", d.split_seed, "Seed for --split-mode random")->capture_default_str();
  sub->add_flag("--allow-isolated", d.allow_isolated,
                "Give degree-0 nodes a unit diagonal instead of failing");
}

void add_basis_options(CLI::App* sub, BasisArgs& b, bool allow_cache) {
  if (allow_cache) {
    sub->add_option("--basis", b.cache, "Basis cache from `gwnn basis`")->check(CLI::ExistingFile);
  }
  sub->add_option("--method", b.method, "Basis construction")
      ->check(CLI::IsMember({"exact", "cheb"}))
      ->capture_default_str();
  sub->add_option("--s", b.s, "Wavelet scale")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--t", b.t, "Sparsification threshold")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--m", b.m, "Chebyshev order")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--swap-kernel", b.swap_kernel, "psi = e^{-sL}, psi_inv = e^{+sL}");
  sub->add_option("--lambda-max", b.lambda_max, "Spectrum bound for the Chebyshev path")
      ->check(CLI::IsMember({"analytic", "power"}))
      ->capture_default_str();
  sub->add_option("--block", b.block, "Identity columns per materialization block")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--eigen-cap", b.eigen_cap, "Largest n accepted by --method exact")
      ->capture_default_str();
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--hidden", o.model.hidden)->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--dropout", o.model.dropout)->check(CLI::Range(0.0, 0.999999))->capture_default_str();
  sub->add_option("--seed", o.model.seed)->envname("GWNN_SEED")->capture_default_str();
  sub->add_option("--lr", o.train.lr)->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--max-epochs", o.train.max_epochs)->capture_default_str();
  sub->add_option("--patience", o.train.patience)->capture_default_str();
  sub->add_option("--weight-decay", o.train.weight_decay)
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

Dataset load_data(const DataArgs& d) {
  LoadOptions opts;
  opts.split_mode = d.split_mode == "random" ? SplitMode::kSeededRandom : SplitMode::kFirstByIndex;
  opts.split_seed = d.split_seed;
  return load_dataset(d.dir, opts);
}

BasisSpec to_spec(const BasisArgs& b, bool allow_isolated) {
  BasisSpec spec;
  spec.method = b.method == "exact" ? BasisMethod::kExact : BasisMethod::kChebyshev;
  spec.s = b.s;
  spec.t = b.t;
  spec.order = b.m;
  spec.convention = b.swap_kernel ? KernelConvention::kHeatForward : KernelConvention::kHeatInverse;
  spec.power_lambda_max = b.lambda_max == "power";
  spec.allow_isolated = allow_isolated;
  spec.eigen_cap = b.eigen_cap;
  spec.block_size = b.block;
  return spec;
}

SpectralBasis obtain_basis(const Options& o, const Dataset& d) {
  if (!o.basis.cache.empty()) {
    SpectralBasis b = load_basis(o.basis.cache);
    if (b.size() != d.node_count()) {
      throw DataError(o.basis.cache + ": basis has n=" + std::to_string(b.size()) +
                      " but dataset has n=" + std::to_string(d.node_count()));
    }
    return b;
  }
  return build_basis(d.graph, to_spec(o.basis, o.data.allow_isolated));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path + " for writing");
  return f;
}

void print_basis_keys(const SpectralBasis& b) {
  std::cout << "method=" << b.method_tag() << "\n"
            << "convention=" << to_string(b.convention) << "\n"
            << "s=" << b.scale << "\n"
            << "t=" << b.threshold << "\n";
}

int cmd_basis(const Options& o) {
  const Dataset d = load_data(o.data);
  const BasisSpec spec = to_spec(o.basis, o.data.allow_isolated);
  std::optional<EigenSystem> es;
  SpectralBasis basis;
  if (spec.method == BasisMethod::kExact || o.fourier) {
    es = eigendecompose(normalized_laplacian(d.graph, spec.allow_isolated), spec.eigen_cap);
  }
  if (spec.method == BasisMethod::kExact) {
    basis = wavelet_basis_exact(*es, spec.s, spec.t, spec.convention);
  } else {
    basis = build_basis(d.graph, spec);
  }
  if (!o.out.empty()) save_basis(basis, o.out);
  const SparsityReport rep = sparsity_report(d.graph, basis, es ? &*es : nullptr, spec.allow_isolated);
  write_report_text(rep, std::cout);
  if (!o.report.empty()) {
    auto f = open_out(o.report);
    write_report_tsv(rep, f);
  }
  print_basis_keys(basis);
  for (const auto& row : rep.rows) {
    std::cout << row.name << "_nnz=" << row.nnz << "\n" << row.name << "_density=" << row.density << "\n";
  }
  if (!o.out.empty()) std::cout << "out=" << o.out << "\n";
  std::cout << "n=" << basis.size() << "\n";
  return 0;
}

int cmd_train(const Options& o) {
  const Dataset d = load_data(o.data);
  const SpectralBasis basis = obtain_basis(o, d);
  const RunResult r = run_training(d, basis, o.model, o.train);
  if (!o.history.empty()) {
    auto f = open_out(o.history);
    write_history_csv(r.train.history, f);
  }
  if (!o.checkpoint.empty()) {
    CheckpointMeta meta;
    meta.train = o.train;
    meta.basis_method = basis.method_tag();
    meta.convention = basis.convention;
    meta.best_epoch = r.train.best_epoch;
    meta.split_source = d.split_source;
    save_checkpoint(r.train.model, meta, o.checkpoint);
  }
  print_basis_keys(basis);
  std::cout << "parameter_count=" << parameter_count(r.train.model.config) << "\n"
            << "best_epoch=" << r.train.best_epoch << "\n"
            << "stopped_epoch=" << r.train.stopped_epoch << "\n"
            << "val_accuracy=" << r.val_accuracy << "\n"
            << "test_accuracy=" << r.test_accuracy << "\n";
  return 0;
}

int cmd_sweep(const Options& o) {
  const Dataset d = load_data(o.data);
  const BasisSpec base = to_spec(o.basis, o.data.allow_isolated);
  const auto points = run_sweep(d, o.s_grid, o.t_grid, base, o.model, o.train, o.fresh_seed);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out.empty()) {
    file = open_out(o.out);
    out = &file;
  }
  *out << "s\tt\tval_accuracy\ttest_accuracy\tseed\tbest_epoch\n";
  const SweepPoint* best = nullptr;
  for (const auto& p : points) {
    *out << p.s << '\t' << p.t << '\t' << p.val_accuracy << '\t' << p.test_accuracy << '\t' << p.seed
         << '\t' << p.best_epoch << '\n';
    if (!best || p.val_accuracy > best->val_accuracy) best = &p;
  }
  std::cout << "seed_mode=" << (o.fresh_seed ? "fresh" : "fixed") << "\n";
  if (best) {
    std::cout << "best_s=" << best->s << "\nbest_t=" << best->t
              << "\nbest_val_accuracy=" << best->val_accuracy << "\n";
  }
  std::cout << "points=" << points.size() << "\n";
  return 0;
}

int cmd_top_bases(const Options& o) {
  const Dataset d = load_data(o.data);
  const SpectralBasis basis = obtain_basis(o, d);
  const auto top = top_active_bases(basis, d.features, o.feature, o.k, d.labels);
  std::cout << "node\tvalue\tclass\n";
  for (const auto& a : top) std::cout << a.node << '\t' << a.value << '\t' << a.label << '\n';
  print_basis_keys(basis);
  std::cout << "feature=" << o.feature << "\nrows=" << top.size() << "\n";
  return 0;
}

int cmd_locality(const Options& o) {
  const Dataset d = load_data(o.data);
  const SpectralBasis basis = obtain_basis(o, d);
  const HopProfile prof = locality_profile(basis, d.graph, o.node);
  write_profile_tsv(prof, std::cout);
  print_basis_keys(basis);
  std::cout << "node=" << o.node << "\nunreachable_mass=" << prof.unreachable_mass
            << "\nbins=" << prof.mass.size() << "\n";
  return 0;
}

int cmd_support(const Options& o) {
  const Dataset d = load_data(o.data);
  const SpectralBasis basis = obtain_basis(o, d);
  if (o.node >= basis.size()) throw DataError("node " + std::to_string(o.node) + " out of range");
  const SparseMatrix h = convolution_support(basis);
  bool identity = true;
  for (std::size_t i = 0; i < h.rows() && identity; ++i) {
    const auto cols = h.row_cols(i);
    const auto vals = h.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double target = cols[k] == i ? 1.0 : 0.0;
      if (std::abs(vals[k] - target) > 1e-9) {
        identity = false;
        break;
      }
    }
  }
  if (identity) {
    std::cerr << "warning: H = psi * psi_inv is the identity (within 1e-9); an exact basis with "
                 "t = 0 has no off-diagonal support to analyse\n";
  }
  write_support_row_tsv(h, d.graph, o.node, std::cout);
  const SupportStats st = support_stats(h, d.graph, o.node);
  print_basis_keys(basis);
  std::cout << "node=" << o.node << "\nsupport_size=" << st.support_size << "\nmax_hop=";
  if (st.max_hop == kUnreachable) {
    std::cout << "inf";
  } else {
    std::cout << st.max_hop;
  }
  std::cout << "\nmean_hop=" << st.mean_hop << "\nidentity=" << (identity ? "true" : "false") << "\n";
  return 0;
}

int cmd_bench(const Options& o) {
  const auto cheb = bench::bench_cheb_apply(o.sizes, o.edges_per_node, o.bench_order, o.columns,
                                            o.repeat, o.model.seed);
  std::cout << "kind\tnodes\tedges\tseconds\n";
  for (const auto& p : cheb.points)
    std::cout << "cheb_apply\t" << p.nodes << '\t' << p.edges << '\t' << p.seconds << '\n';
  std::optional<bench::ScalingResult> exact;
  if (!o.skip_exact) {
    exact = bench::bench_exact_basis(o.exact_sizes, o.repeat);
    for (const auto& p : exact->points)
      std::cout << "exact_basis\t" << p.nodes << '\t' << p.edges << '\t' << p.seconds << '\n';
  }
  const std::size_t ratio_n = o.sizes.empty() ? 2000 : o.sizes[o.sizes.size() / 2];
  const double ratio =
      bench::bench_order_ratio(ratio_n, o.edges_per_node, 10, 30, o.columns, o.repeat, o.model.seed);
  std::cout << "cheb_slope=" << cheb.slope << "\n";
  if (exact) std::cout << "exact_slope=" << exact->slope << "\n";
  std::cout << "order_ratio_30_10=" << ratio << "\n"
            << "scaling_ok=" << (cheb.slope < 1.3 ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse spectral graph wavelet toolkit"};
  app.set_config("--config", "", "key=value config file (INI/TOML subset, see README)");
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)")
      ->envname("GWNN_THREADS")
      ->capture_default_str();

  auto* basis = app.add_subcommand("basis", "Build a wavelet basis, write the cache, report sparsity");
  add_data_options(basis, o.data);
  add_basis_options(basis, o.basis, false);
  basis->add_option("--out", o.out, "Basis cache file");
  basis->add_option("--report", o.report, "Also write the density table as TSV");
  basis->add_flag("--fourier", o.fourier, "Eigendecompose to report the dense U^T row");

  auto* train = app.add_subcommand("train", "Train the two-layer model");
  add_data_options(train, o.data);
  add_basis_options(train, o.basis, true);
  add_model_options(train, o);
  train->add_option("--checkpoint", o.checkpoint, "Write the best-epoch parameters as JSON");
  train->add_option("--history", o.history, "Write per-epoch losses as CSV");

  auto* sweep = app.add_subcommand("sweep", "Grid search over s and t");
  add_data_options(sweep, o.data);
  add_basis_options(sweep, o.basis, false);
  add_model_options(sweep, o);
  sweep->add_option("--s-grid", o.s_grid, "Comma-separated scales")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_option("--t-grid", o.t_grid, "Comma-separated thresholds")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_flag("--fresh-seed", o.fresh_seed, "Use seed + i for the i-th grid point");
  sweep->add_option("--out", o.out, "TSV output (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Interpretability and locality reports");
  analyze->require_subcommand(1);
  auto* top = analyze->add_subcommand("top-bases", "Largest entries of psi_inv X[:, feature]");
  auto* loc = analyze->add_subcommand("locality", "Hop histogram of psi_inv[:, node]");
  auto* sup = analyze->add_subcommand("support", "Row of H = psi psi_inv by hop");
  for (auto* sub : {top, loc, sup}) {
    add_data_options(sub, o.data);
    add_basis_options(sub, o.basis, true);
  }
  top->add_option("--feature", o.feature)->required();
  top->add_option("--k", o.k)->capture_default_str();
  loc->add_option("--node", o.node)->required();
  sup->add_option("--node", o.node)->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Timing on synthetic graphs");
  bench->add_option("--sizes", o.sizes, "Node counts for the Chebyshev apply")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--exact-sizes", o.exact_sizes, "Node counts for the exact basis")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--edges-per-node", o.edges_per_node)->capture_default_str();
  bench->add_option("--columns", o.columns)->capture_default_str();
  bench->add_option("--repeat", o.repeat)->capture_default_str();
  bench->add_option("--m", o.bench_order)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--seed", o.model.seed)->envname("GWNN_SEED")->capture_default_str();
  bench->add_flag("--skip-exact", o.skip_exact);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  try {
    set_thread_count(o.threads);
    if (*basis) return cmd_basis(o);
    if (*train) return cmd_train(o);
    if (*sweep) return cmd_sweep(o);
    if (*top) return cmd_top_bases(o);
    if (*loc) return cmd_locality(o);
    if (*sup) return cmd_support(o);
    if (*bench) return cmd_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  } catch (const DimensionError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kData);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kNumerical);
  }
  return static_cast<int>(ExitCode::kUsage);
}
