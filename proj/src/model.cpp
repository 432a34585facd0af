#include "gwnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "gwnn/errors.hpp"
#include "json.hpp"

namespace gwnn {

using nlohmann::json;

void ModelConfig::validate() const {
  if (hidden < 1) throw UsageError("hidden units must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  if (c < 1) throw UsageError("class count must be >= 1");
}

void TrainConfig::validate() const {
  if (patience < 1) throw UsageError("patience must be >= 1");
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (!(weight_decay >= 0.0)) throw UsageError("weight decay must be >= 0");
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  if (rows < 1 || cols < 1) throw UsageError("glorot_init needs rows, cols >= 1");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> unif(-bound, bound);
  DenseMatrix w(rows, cols);
  for (double& v : w.values()) v = unif(rng);
  return w;
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return glorot_init(rows, cols, rng);
}

Model init_model(const ModelConfig& config) {
  config.validate();
  Model m;
  m.config = config;
  std::mt19937_64 rng(config.seed);
  m.layer1.weight = glorot_init(config.p, config.hidden, rng);
  m.layer1.filter.assign(config.n, 1.0);
  m.layer2.weight = glorot_init(config.hidden, config.c, rng);
  m.layer2.filter.assign(config.n, 1.0);
  return m;
}

std::size_t parameter_count(const ModelConfig& cfg) {
  return cfg.p * cfg.hidden + cfg.n + cfg.hidden * cfg.c + cfg.n;
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const auto src = logits.row(r);
    auto dst = out.row(r);
    const double mx = *std::max_element(src.begin(), src.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < src.size(); ++j) {
      dst[j] = std::exp(src[j] - mx);
      sum += dst[j];
    }
    for (double& v : dst) v /= sum;
  }
  return out;
}

namespace {

// rows[i] *= diag[i]
DenseMatrix scale_rows(const DenseMatrix& m, const std::vector<double>& diag) {
  DenseMatrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (double& v : out.row(r)) v *= diag[r];
  return out;
}

std::vector<double> row_dots(const DenseMatrix& a, const DenseMatrix& b) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ar = a.row(r);
    const auto br = b.row(r);
    double acc = 0.0;
    for (std::size_t j = 0; j < ar.size(); ++j) acc += ar[j] * br[j];
    out[r] = acc;
  }
  return out;
}

SparseMatrix drop_sparse(const SparseMatrix& x, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  std::vector<std::size_t> ptr(x.rows() + 1, 0), idx;
  std::vector<double> vals;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto cols = x.row_cols(r);
    const auto v = x.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (keep(rng)) {
        idx.push_back(cols[k]);
        vals.push_back(v[k] * scale);
      }
    }
    ptr[r + 1] = idx.size();
  }
  return SparseMatrix(x.rows(), x.cols(), std::move(ptr), std::move(idx), std::move(vals));
}

void check_label(int y, std::size_t c, std::size_t node) {
  if (y < 0 || static_cast<std::size_t>(y) >= c) {
    throw DataError("label " + std::to_string(y) + " of node " + std::to_string(node) +
                    " outside [0, " + std::to_string(c) + ")");
  }
}

}  // namespace

ForwardResult forward(const Model& model, const SpectralBasis& basis, const SparseMatrix& x,
                      bool train_mode, std::mt19937_64* rng) {
  const auto& cfg = model.config;
  if (x.rows() != cfg.n || basis.size() != cfg.n || x.cols() != cfg.p) {
    throw DimensionError("forward: features " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", basis n=" + std::to_string(basis.size()) +
                         ", model expects n=" + std::to_string(cfg.n) + " p=" +
                         std::to_string(cfg.p));
  }
  const bool drop = train_mode && cfg.dropout > 0.0;
  if (drop && rng == nullptr) throw std::invalid_argument("forward: dropout needs an RNG");

  ForwardResult out;
  auto& cache = out.cache;
  cache.model_version = model.version;
  cache.train_mode = train_mode;
  cache.x_dropped = drop ? drop_sparse(x, cfg.dropout, *rng) : x;

  cache.spec1 = spmm(basis.psi_inv, spmm(cache.x_dropped, model.layer1.weight));
  cache.pre1 = spmm(basis.psi, scale_rows(cache.spec1, model.layer1.filter));
  cache.hidden = cache.pre1;
  for (double& v : cache.hidden.values()) v = std::max(v, 0.0);

  cache.hidden_mask = DenseMatrix(cfg.n, cfg.hidden, 1.0);
  if (drop) {
    std::bernoulli_distribution keep(1.0 - cfg.dropout);
    const double scale = 1.0 / (1.0 - cfg.dropout);
    for (double& v : cache.hidden_mask.values()) v = keep(*rng) ? scale : 0.0;
  }
  cache.hidden_dropped = cache.hidden;
  {
    auto h = cache.hidden_dropped.values();
    const auto m = cache.hidden_mask.values();
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= m[i];
  }

  cache.spec2 = spmm(basis.psi_inv, matmul(cache.hidden_dropped, model.layer2.weight));
  cache.logits = spmm(basis.psi, scale_rows(cache.spec2, model.layer2.filter));
  out.prediction.probs = softmax_rows(cache.logits);
  return out;
}

double cross_entropy(const Prediction& pred, const std::vector<int>& labels,
                     std::span<const std::size_t> idx) {
  double total = 0.0;
  for (std::size_t l : idx) {
    check_label(labels[l], pred.probs.cols(), l);
    total -= std::log(pred.probs(l, static_cast<std::size_t>(labels[l])));
  }
  return total;
}

double loss(const Model& model, const Prediction& pred, const std::vector<int>& labels,
            std::span<const std::size_t> train_idx, double weight_decay) {
  if (train_idx.empty()) throw DataError("loss: empty training index set");
  double total = cross_entropy(pred, labels, train_idx);
  if (weight_decay > 0.0) {
    const double w = frobenius_norm(model.layer1.weight);
    total += 0.5 * weight_decay * w * w;
  }
  return total;
}

Gradients backward(const Model& model, const SpectralBasis& basis, const ForwardResult& fwd,
                   const std::vector<int>& labels, std::span<const std::size_t> train_idx,
                   double weight_decay) {
  const auto& cache = fwd.cache;
  if (cache.model_version != model.version) {
    throw std::logic_error("backward: forward cache is stale (model version " +
                           std::to_string(cache.model_version) + " vs " +
                           std::to_string(model.version) + ")");
  }
  const auto& probs = fwd.prediction.probs;
  const std::size_t c = probs.cols();

  // d loss / d logits = Z - Y on labelled rows.
  DenseMatrix d_logits(probs.rows(), c);
  for (std::size_t l : train_idx) {
    check_label(labels[l], c, l);
    auto dst = d_logits.row(l);
    const auto src = probs.row(l);
    for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
    dst[static_cast<std::size_t>(labels[l])] -= 1.0;
  }

  Gradients g;
  // Layer 2: logits = psi diag(F2) spec2, spec2 = psi_inv (Hd W2).
  const DenseMatrix d_scaled2 = spmm_transposed(basis.psi, d_logits);
  g.filter2 = row_dots(d_scaled2, cache.spec2);
  const DenseMatrix d_a2 = spmm_transposed(basis.psi_inv, scale_rows(d_scaled2, model.layer2.filter));
  g.weight2 = matmul_tn(cache.hidden_dropped, d_a2);
  DenseMatrix d_pre1 = matmul_nt(d_a2, model.layer2.weight);
  {
    auto d = d_pre1.values();
    const auto mask = cache.hidden_mask.values();
    const auto pre = cache.pre1.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = pre[i] > 0.0 ? d[i] * mask[i] : 0.0;
  }

  // Layer 1: pre1 = psi diag(F1) spec1, spec1 = psi_inv (Xd W1).
  const DenseMatrix d_scaled1 = spmm_transposed(basis.psi, d_pre1);
  g.filter1 = row_dots(d_scaled1, cache.spec1);
  const DenseMatrix d_a1 = spmm_transposed(basis.psi_inv, scale_rows(d_scaled1, model.layer1.filter));
  g.weight1 = spmm_transposed(cache.x_dropped, d_a1);
  if (weight_decay > 0.0) {
    auto gw = g.weight1.values();
    const auto w = model.layer1.weight.values();
    for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += weight_decay * w[i];
  }
  return g;
}

void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state,
                 double lr) {
  if (params.size() != grads.size()) throw DimensionError("adam_update: size mismatch");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw DimensionError("adam_update: state size mismatch");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr) {
  // Flatten W1 | F1 | W2 | F2 so one state vector covers every parameter.
  std::vector<double> params, flat_grads;
  auto append = [](std::vector<double>& dst, std::span<const double> src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };
  append(params, model.layer1.weight.values());
  append(params, model.layer1.filter);
  append(params, model.layer2.weight.values());
  append(params, model.layer2.filter);
  append(flat_grads, grads.weight1.values());
  append(flat_grads, grads.filter1);
  append(flat_grads, grads.weight2.values());
  append(flat_grads, grads.filter2);

  adam_update(params, flat_grads, state, lr);

  std::size_t off = 0;
  auto scatter = [&](std::span<double> dst) {
    std::copy(params.begin() + static_cast<std::ptrdiff_t>(off),
              params.begin() + static_cast<std::ptrdiff_t>(off + dst.size()), dst.begin());
    off += dst.size();
  };
  scatter(model.layer1.weight.values());
  scatter(model.layer1.filter);
  scatter(model.layer2.weight.values());
  scatter(model.layer2.filter);
  ++model.version;
}

std::vector<int> argmax_rows(const DenseMatrix& probs) {
  std::vector<int> out(probs.rows(), 0);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const auto row = probs.row(r);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] > row[best]) best = j;
    out[r] = static_cast<int>(best);
  }
  return out;
}

double accuracy(const Prediction& pred, const std::vector<int>& labels,
                std::span<const std::size_t> idx) {
  if (idx.empty()) throw DataError("accuracy: empty index set");
  const auto predicted = argmax_rows(pred.probs);
  std::size_t hits = 0;
  for (std::size_t l : idx) hits += predicted[l] == labels[l] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(idx.size());
}

namespace {
const std::vector<std::size_t>& pick(const Split& s, SplitKind kind) {
  switch (kind) {
    case SplitKind::kTrain: return s.train;
    case SplitKind::kVal: return s.val;
    case SplitKind::kTest: return s.test;
  }
  return s.test;
}
}  // namespace

double evaluate(const Model& model, const SpectralBasis& basis, const Dataset& data,
                SplitKind split) {
  const auto fwd = forward(model, basis, data.features, false);
  return accuracy(fwd.prediction, data.labels, pick(data.split, split));
}

EarlyStopping::EarlyStopping(std::size_t patience)
    : patience_(patience), best_loss_(std::numeric_limits<double>::infinity()) {
  if (patience < 1) throw UsageError("patience must be >= 1");
}

bool EarlyStopping::update(std::size_t epoch, double val_loss) {
  improved_ = !seen_ || val_loss < best_loss_;
  seen_ = true;
  if (improved_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
  }
  return epoch >= best_epoch_ + patience_;
}

TrainResult train(Model model, const SpectralBasis& basis, const Dataset& data,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (data.split.train.empty() || data.split.val.empty()) {
    throw DataError("train: train and validation splits must be non-empty");
  }
  std::mt19937_64 dropout_rng(model.config.seed ^ 0x9e3779b97f4a7c15ULL);
  AdamState adam;
  EarlyStopping stopper(cfg.patience);
  TrainResult result;
  result.model = model;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto fwd = forward(model, basis, data.features, true, &dropout_rng);
    const double train_loss =
        loss(model, fwd.prediction, data.labels, data.split.train, cfg.weight_decay);
    const auto grads = backward(model, basis, fwd, data.labels, data.split.train, cfg.weight_decay);
    adam_step(model, grads, adam, cfg.lr);

    const auto eval = forward(model, basis, data.features, false);
    const double val_loss = cross_entropy(eval.prediction, data.labels, data.split.val);
    const double val_acc = accuracy(eval.prediction, data.labels, data.split.val);
    result.history.push_back({epoch, train_loss, val_loss, val_acc});

    const bool stop = stopper.update(epoch, val_loss);
    if (stopper.improved()) result.model = model;
    result.stopped_epoch = epoch;
    if (stop) break;
  }
  result.best_epoch = stopper.best_epoch();
  return result;
}

void write_history_csv(const std::vector<EpochRecord>& history, std::ostream& out) {
  out << "epoch,train_loss,val_loss,val_acc\n";
  char buf[128];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.6f\n", h.epoch, h.train_loss, h.val_loss,
                  h.val_acc);
    out << buf;
  }
}

namespace {

json matrix_json(const DenseMatrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

DenseMatrix matrix_from_json(const json& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("values").get<std::vector<double>>());
}

}  // namespace

void save_checkpoint(const Model& model, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
  const auto& c = model.config;
  json j;
  j["format"] = "gwnn-checkpoint";
  j["version"] = 1;
  j["config"] = {{"n", c.n},           {"p", c.p}, {"hidden", c.hidden}, {"c", c.c},
                 {"s", c.s},           {"t", c.t}, {"dropout", c.dropout},
                 {"seed", c.seed}};
  j["train"] = {{"lr", meta.train.lr},
                {"max_epochs", meta.train.max_epochs},
                {"patience", meta.train.patience},
                {"weight_decay", meta.train.weight_decay}};
  j["conventions"] = {{"kernel", to_string(meta.convention)},
                      {"basis_method", meta.basis_method},
                      {"loss", "sum over labelled nodes"},
                      {"argmax_ties", "lowest class index"},
                      {"dropout", "inverted, on layer inputs"},
                      {"split_source", meta.split_source}};
  j["best_epoch"] = meta.best_epoch;
  j["parameter_count"] = parameter_count(c);
  j["layers"] = json::array();
  for (const LayerParams* layer : {&model.layer1, &model.layer2}) {
    j["layers"].push_back({{"weight", matrix_json(layer->weight)}, {"filter", layer->filter}});
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << j.dump(1) << '\n';
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  try {
    const json j = json::parse(in);
    if (j.at("format") != "gwnn-checkpoint") throw DataError(path.string() + ": not a checkpoint");
    Model m;
    const auto& c = j.at("config");
    m.config.n = c.at("n");
    m.config.p = c.at("p");
    m.config.hidden = c.at("hidden");
    m.config.c = c.at("c");
    m.config.s = c.at("s");
    m.config.t = c.at("t");
    m.config.dropout = c.at("dropout");
    m.config.seed = c.at("seed");
    const auto& layers = j.at("layers");
    m.layer1.weight = matrix_from_json(layers.at(0).at("weight"));
    m.layer1.filter = layers.at(0).at("filter").get<std::vector<double>>();
    m.layer2.weight = matrix_from_json(layers.at(1).at("weight"));
    m.layer2.filter = layers.at(1).at("filter").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed checkpoint: " + e.what());
  }
}

}  // namespace gwnn
