#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/chebyshev.hpp"
#include "gwnn/dataset.hpp"
#include "gwnn/graph.hpp"
#include "gwnn/model.hpp"
#include "gwnn/spectral.hpp"

namespace gwnn {

struct BasisSpec {
  BasisMethod method = BasisMethod::kChebyshev;
  double s = 1.0;
  double t = 1e-4;
  std::size_t order = kDefaultChebOrder;
  KernelConvention convention = KernelConvention::kHeatInverse;
  // Power iteration instead of the analytic bound 2.0.
  bool power_lambda_max = false;
  bool allow_isolated = false;
  std::size_t eigen_cap = kDefaultEigenCap;
  std::size_t block_size = 64;
};

SpectralBasis build_basis(const Graph& g, const BasisSpec& spec);

struct RunResult {
  TrainResult train;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Fills n, p, c from the dataset and s, t from the basis, then trains.
RunResult run_training(const Dataset& data, const SpectralBasis& basis, ModelConfig model_cfg,
                       const TrainConfig& train_cfg);

struct SweepPoint {
  double s = 0.0;
  double t = 0.0;
  std::uint64_t seed = 0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t best_epoch = 0;
};

// Trains once per (s, t) grid point. With `fresh_seed` the i-th point uses
// seed + i, otherwise every point shares model_cfg.seed.
std::vector<SweepPoint> run_sweep(const Dataset& data, std::span<const double> s_grid,
                                  std::span<const double> t_grid, const BasisSpec& base,
                                  const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                                  bool fresh_seed = false);

}  // namespace gwnn
