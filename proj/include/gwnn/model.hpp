#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gwnn/basis.hpp"
#include "gwnn/dataset.hpp"
#include "gwnn/matrix.hpp"

namespace gwnn {

struct ModelConfig {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t hidden = 16;
  std::size_t c = 0;
  double s = 1.0;
  double t = 1e-4;
  double dropout = 0.5;
  std::uint64_t seed = 0;

  // Throws UsageError on hidden == 0 or dropout outside [0, 1).
  void validate() const;
};

struct TrainConfig {
  double lr = 0.01;
  std::size_t max_epochs = 2000;
  std::size_t patience = 100;
  // L2 penalty weight_decay/2 * ||W1||_F^2 on the first-layer weights.
  double weight_decay = 0.0;

  void validate() const;
};

// One detached layer: X' = X W, then h(psi diag(filter) psi_inv X').
struct LayerParams {
  DenseMatrix weight;
  std::vector<double> filter;

  std::size_t parameter_count() const { return weight.size() + filter.size(); }
};

struct Model {
  ModelConfig config;
  LayerParams layer1;
  LayerParams layer2;
  // Bumped on every parameter update; lets backward() reject stale caches.
  std::uint64_t version = 0;
};

// Row-stochastic class probabilities, n x c.
struct Prediction {
  DenseMatrix probs;
};

// Intermediates retained by forward() for backward().
struct ForwardCache {
  std::uint64_t model_version = 0;
  bool train_mode = false;
  SparseMatrix x_dropped;   // dropout(X)
  DenseMatrix spec1;        // psi_inv (X W1)
  DenseMatrix pre1;         // psi diag(F1) spec1
  DenseMatrix hidden;       // ReLU(pre1)
  DenseMatrix hidden_mask;  // inverted-dropout scale per hidden entry
  DenseMatrix hidden_dropped;
  DenseMatrix spec2;        // psi_inv (hidden_dropped W2)
  DenseMatrix logits;       // psi diag(F2) spec2
};

struct ForwardResult {
  Prediction prediction;
  ForwardCache cache;
};

struct Gradients {
  DenseMatrix weight1;
  std::vector<double> filter1;
  DenseMatrix weight2;
  std::vector<double> filter2;
};

// Entries uniform in +-sqrt(6 / (rows + cols)).
DenseMatrix glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed);
DenseMatrix glorot_init(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

// Glorot weights and all-ones spectral filters.
Model init_model(const ModelConfig& config);

// Sum over layers of (p*q + n).
std::size_t parameter_count(const ModelConfig& config);

// Row-wise softmax with max subtraction.
DenseMatrix softmax_rows(const DenseMatrix& logits);

// When `train_mode`, `rng` drives inverted dropout on the input features
// and the hidden activations; it may be null otherwise.
ForwardResult forward(const Model& model, const SpectralBasis& basis, const SparseMatrix& x,
                      bool train_mode, std::mt19937_64* rng = nullptr);

// -sum_{l in idx} ln Z[l, y_l]  (sum, not mean).
double cross_entropy(const Prediction& pred, const std::vector<int>& labels,
                     std::span<const std::size_t> idx);

// Cross entropy over `train_idx` plus weight_decay/2 * ||W1||^2.
double loss(const Model& model, const Prediction& pred, const std::vector<int>& labels,
            std::span<const std::size_t> train_idx, double weight_decay = 0.0);

// Exact gradients of loss() with respect to W1, F1, W2, F2.
Gradients backward(const Model& model, const SpectralBasis& basis, const ForwardResult& fwd,
                   const std::vector<int>& labels, std::span<const std::size_t> train_idx,
                   double weight_decay = 0.0);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
};

// Bias-corrected Adam on a flat parameter vector. `state.m`/`state.v`
// are sized on first use.
void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state,
                 double lr);

// Adam over all four parameter blocks (flattened W1, F1, W2, F2).
void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr);

// Index of the largest entry per row; ties go to the lowest class index.
std::vector<int> argmax_rows(const DenseMatrix& probs);

double accuracy(const Prediction& pred, const std::vector<int>& labels,
                std::span<const std::size_t> idx);

enum class SplitKind { kTrain, kVal, kTest };

double evaluate(const Model& model, const SpectralBasis& basis, const Dataset& data,
                SplitKind split);

// Stops once validation loss has not strictly decreased for `patience`
// consecutive epochs, i.e. at epoch best_epoch + patience.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience);
  // Returns true when training should stop after this epoch.
  bool update(std::size_t epoch, double val_loss);
  bool improved() const { return improved_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  std::size_t best_epoch_ = 0;
  double best_loss_;
  bool improved_ = false;
  bool seen_ = false;
};

struct EpochRecord {
  std::size_t epoch;
  double train_loss;
  double val_loss;
  double val_acc;
};

struct TrainResult {
  Model model;  // parameters of the best-validation-loss epoch
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::size_t stopped_epoch = 0;
};

// Full-batch training with Adam and early stopping. Deterministic given
// model.config.seed.
TrainResult train(Model model, const SpectralBasis& basis, const Dataset& data,
                  const TrainConfig& cfg);

void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& out);

// JSON checkpoint: config echo, conventions, and every parameter array.
struct CheckpointMeta {
  TrainConfig train;
  std::string basis_method;
  KernelConvention convention = KernelConvention::kHeatInverse;
  std::size_t best_epoch = 0;
  std::string split_source;
};

void save_checkpoint(const Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace gwnn
