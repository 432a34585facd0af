#include "gwnn/experiment.hpp"

#include "gwnn/errors.hpp"

namespace gwnn {

SpectralBasis build_basis(const Graph& g, const BasisSpec& spec) {
  if (!(spec.s >= 0.0)) throw UsageError("wavelet scale s must be >= 0");
  if (!(spec.t >= 0.0)) throw UsageError("threshold t must be >= 0");
  const SparseMatrix lap = normalized_laplacian(g, spec.allow_isolated);
  if (spec.method == BasisMethod::kExact) {
    const EigenSystem es = eigendecompose(lap, spec.eigen_cap);
    return wavelet_basis_exact(es, spec.s, spec.t, spec.convention);
  }
  MaterializeOptions opts;
  opts.convention = spec.convention;
  opts.block_size = spec.block_size;
  opts.lambda_max = spec.power_lambda_max ? estimate_lambda_max(lap).value : kNormalizedLaplacianBound;
  return materialize_basis(lap, spec.s, spec.t, spec.order, opts);
}

RunResult run_training(const Dataset& data, const SpectralBasis& basis, ModelConfig cfg,
                       const TrainConfig& train_cfg) {
  cfg.n = data.node_count();
  cfg.p = data.feature_count();
  cfg.c = data.num_classes;
  cfg.s = basis.scale;
  cfg.t = basis.threshold;
  if (basis.size() != cfg.n) {
    throw DimensionError("basis has n=" + std::to_string(basis.size()) + " but dataset has n=" +
                         std::to_string(cfg.n));
  }
  RunResult r;
  r.train = train(init_model(cfg), basis, data, train_cfg);
  r.val_accuracy = evaluate(r.train.model, basis, data, SplitKind::kVal);
  if (!data.split.test.empty()) r.test_accuracy = evaluate(r.train.model, basis, data, SplitKind::kTest);
  return r;
}

std::vector<SweepPoint> run_sweep(const Dataset& data, std::span<const double> s_grid,
                                  std::span<const double> t_grid, const BasisSpec& base,
                                  const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                                  bool fresh_seed) {
  std::vector<SweepPoint> out;
  std::uint64_t index = 0;
  for (double s : s_grid) {
    for (double t : t_grid) {
      BasisSpec spec = base;
      spec.s = s;
      spec.t = t;
      const SpectralBasis basis = build_basis(data.graph, spec);
      ModelConfig cfg = model_cfg;
      cfg.seed = fresh_seed ? model_cfg.seed + index : model_cfg.seed;
      const RunResult r = run_training(data, basis, cfg, train_cfg);
      out.push_back({s, t, cfg.seed, r.val_accuracy, r.test_accuracy, r.train.best_epoch});
      ++index;
    }
  }
  return out;
}

}  // namespace gwnn
