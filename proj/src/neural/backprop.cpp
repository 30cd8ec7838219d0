#include "craic/neural/backprop.hpp"

#include "craic/error.hpp"

#include <algorithm>
#include <cmath>

namespace craic::neural {

StepBatch packEncoderBatch(const std::vector<std::vector<TokenId>>& sequences) {
  StepBatch b;
  b.batch = static_cast<int>(sequences.size());
  for (const auto& s : sequences) b.steps = std::max(b.steps, static_cast<int>(s.size()));
  b.inputs.assign(static_cast<std::size_t>(b.steps) * b.batch, kPad);
  b.mask.assign(b.inputs.size(), 0);
  for (int j = 0; j < b.batch; ++j) {
    const auto& s = sequences[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t < s.size(); ++t) {
      b.inputs[b.at(static_cast<int>(t), j)] = s[t];
      b.mask[b.at(static_cast<int>(t), j)] = 1;
    }
  }
  return b;
}

StepBatch packDecoderBatch(const std::vector<std::vector<TokenId>>& comments) {
  StepBatch b;
  b.batch = static_cast<int>(comments.size());
  for (const auto& s : comments) b.steps = std::max(b.steps, static_cast<int>(s.size()) + 1);
  const std::size_t n = static_cast<std::size_t>(b.steps) * b.batch;
  b.inputs.assign(n, kPad);
  b.targets.assign(n, kPad);
  b.mask.assign(n, 0);
  for (int j = 0; j < b.batch; ++j) {
    const auto& s = comments[static_cast<std::size_t>(j)];
    for (std::size_t t = 0; t <= s.size(); ++t) {
      const auto idx = b.at(static_cast<int>(t), j);
      b.inputs[idx] = t == 0 ? kBos : s[t - 1];
      b.targets[idx] = t == s.size() ? kEos : s[t];
      b.mask[idx] = 1;
    }
  }
  return b;
}

namespace {

template <typename Real>
struct LayerCache {
  Matrix<Real> a;      // [x; h_prev], (in + K) x B
  Matrix<Real> gates;  // activated i, f, o, g stacked, 4K x B
  Matrix<Real> cPrev;
  Matrix<Real> tanhC;
  Matrix<Real> inputMask;  // dropout mask applied to x; empty when none
};

template <typename Real>
struct StackCache {
  std::vector<std::vector<LayerCache<Real>>> steps;  // [t][l]
  std::vector<Matrix<Real>> top;                     // top-layer h per step
};

template <typename Real>
Matrix<Real> dropoutMask(Eigen::Index rows, Eigen::Index cols, double keep, Rng& rng) {
  Matrix<Real> m(rows, cols);
  const Real scale = static_cast<Real>(1.0 / keep);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.bernoulli(keep) ? scale : Real(0);
  }
  return m;
}

template <typename Real>
Real sigmoid(Real z) {
  return Real(1) / (Real(1) + std::exp(-z));
}

/// Runs a stack over the batch, filling `cache`, and returns the final state.
template <typename Real>
BatchState<Real> forwardStack(const LstmStack<Real>& stack, const StepBatch& batch,
                              BatchState<Real> state, bool maskedUpdates, double keep, Rng* rng,
                              StackCache<Real>& cache) {
  const Eigen::Index k = stack.hidden();
  const int b = batch.batch;
  const bool dropout = keep < 1.0;
  if (dropout && !rng) throw Error(ErrorCode::InvalidArgument, "dropout requires an rng");
  cache.steps.assign(static_cast<std::size_t>(batch.steps), {});
  cache.top.assign(static_cast<std::size_t>(batch.steps), {});

  for (int t = 0; t < batch.steps; ++t) {
    auto& stepCache = cache.steps[static_cast<std::size_t>(t)];
    stepCache.resize(stack.layers.size());
    Matrix<Real> x(k, b);
    for (int j = 0; j < b; ++j) {
      const TokenId id = batch.inputs[batch.at(t, j)];
      if (id < 0 || id >= stack.vocabSize()) {
        throw Error(ErrorCode::InvalidArgument, "input id " + std::to_string(id) + " out of range");
      }
      x.col(j) = stack.embedding.row(id).transpose();
    }
    for (std::size_t l = 0; l < stack.layers.size(); ++l) {
      const auto& layer = stack.layers[l];
      auto& lc = stepCache[l];
      if (dropout) {
        lc.inputMask = dropoutMask<Real>(x.rows(), b, keep, *rng);
        x = x.cwiseProduct(lc.inputMask);
      }
      lc.a.resize(x.rows() + k, b);
      lc.a.topRows(x.rows()) = x;
      lc.a.bottomRows(k) = state.h[l];
      lc.gates = layer.weights * lc.a;
      lc.gates.colwise() += layer.bias;
      lc.gates.topRows(3 * k) = lc.gates.topRows(3 * k).unaryExpr([](Real v) { return sigmoid(v); });
      lc.gates.bottomRows(k) = lc.gates.bottomRows(k).array().tanh();
      lc.cPrev = state.c[l];
      Matrix<Real> c = lc.gates.middleRows(k, k).cwiseProduct(lc.cPrev) +
                       lc.gates.topRows(k).cwiseProduct(lc.gates.bottomRows(k));
      lc.tanhC = c.array().tanh();
      Matrix<Real> h = lc.gates.middleRows(2 * k, k).cwiseProduct(lc.tanhC);
      if (maskedUpdates) {
        for (int j = 0; j < b; ++j) {
          if (!batch.active(t, j)) {
            h.col(j) = state.h[l].col(j);
            c.col(j) = lc.cPrev.col(j);
          }
        }
      }
      state.h[l] = h;
      state.c[l] = std::move(c);
      x = std::move(h);
    }
    cache.top[static_cast<std::size_t>(t)] = state.h.back();
  }
  return state;
}

/// Backpropagation through time over a cached stack run. `dTop` holds the
/// gradient w.r.t. the top hidden state per step (may be empty); `dFinal`
/// the gradient w.r.t. the final state. Returns the gradient w.r.t. the
/// initial state.
template <typename Real>
BatchState<Real> backwardStack(const LstmStack<Real>& stack, const StepBatch& batch,
                               const StackCache<Real>& cache, const std::vector<Matrix<Real>>& dTop,
                               BatchState<Real> dState, bool maskedUpdates, LstmStack<Real>& grad) {
  const Eigen::Index k = stack.hidden();
  const int b = batch.batch;
  const std::size_t layers = stack.layers.size();
  for (int t = batch.steps - 1; t >= 0; --t) {
    const auto& stepCache = cache.steps[static_cast<std::size_t>(t)];
    Matrix<Real> dAbove = dTop.empty() ? Matrix<Real>::Zero(k, b) : dTop[static_cast<std::size_t>(t)];
    for (std::size_t l = layers; l-- > 0;) {
      const auto& layer = stack.layers[l];
      const auto& lc = stepCache[l];
      Matrix<Real> dh = dAbove + dState.h[l];
      Matrix<Real> dc = dState.c[l];
      Matrix<Real> carryH = Matrix<Real>::Zero(k, b);
      Matrix<Real> carryC = Matrix<Real>::Zero(k, b);
      if (maskedUpdates) {
        for (int j = 0; j < b; ++j) {
          if (!batch.active(t, j)) {
            carryH.col(j) = dh.col(j);
            carryC.col(j) = dc.col(j);
            dh.col(j).setZero();
            dc.col(j).setZero();
          }
        }
      }
      const auto gi = lc.gates.topRows(k);
      const auto gf = lc.gates.middleRows(k, k);
      const auto go = lc.gates.middleRows(2 * k, k);
      const auto gg = lc.gates.bottomRows(k);

      const Matrix<Real> dO = dh.cwiseProduct(lc.tanhC);
      dc.array() += dh.array() * go.array() * (Real(1) - lc.tanhC.array().square());

      Matrix<Real> dz(4 * k, b);
      dz.topRows(k) = (dc.array() * gg.array() * gi.array() * (Real(1) - gi.array())).matrix();
      dz.middleRows(k, k) = (dc.array() * lc.cPrev.array() * gf.array() * (Real(1) - gf.array())).matrix();
      dz.middleRows(2 * k, k) = (dO.array() * go.array() * (Real(1) - go.array())).matrix();
      dz.bottomRows(k) = (dc.array() * gi.array() * (Real(1) - gg.array().square())).matrix();

      dState.c[l] = dc.cwiseProduct(gf) + carryC;
      auto& g = grad.layers[l];
      g.weights.noalias() += dz * lc.a.transpose();
      g.bias += dz.rowwise().sum();
      const Matrix<Real> da = layer.weights.transpose() * dz;
      dState.h[l] = da.bottomRows(k) + carryH;
      Matrix<Real> dx = da.topRows(da.rows() - k);
      if (lc.inputMask.size() > 0) dx = dx.cwiseProduct(lc.inputMask);
      if (l > 0) {
        dAbove = std::move(dx);
      } else {
        for (int j = 0; j < b; ++j) {
          if (maskedUpdates && !batch.active(t, j)) continue;
          grad.embedding.row(batch.inputs[batch.at(t, j)]) += dx.col(j).transpose();
        }
      }
    }
  }
  return dState;
}

}  // namespace

template <typename Real>
BatchLoss<Real> batchLoss(const ModelParams<Real>& params, const StepBatch* encoderBatch,
                          const StepBatch& decoderBatch, const BatchState<Real>* initialState,
                          const LossOptions& options, ModelParams<Real>* grad) {
  const auto& dec = params.decoder;
  const Eigen::Index k = dec.hidden();
  const int layers = static_cast<int>(dec.layers.size());
  const int b = decoderBatch.batch;
  const bool seq2seq = params.kind() == ModelKind::Seq2Seq;
  if (seq2seq && (!encoderBatch || encoderBatch->batch != b)) {
    throw Error(ErrorCode::InvalidArgument, "sequence-to-sequence loss needs a matching encoder batch");
  }
  if (options.dropoutKeep <= 0 || options.dropoutKeep > 1) {
    throw Error(ErrorCode::ConfigInvalid, "dropout keep probability must be in (0, 1]");
  }

  StackCache<Real> encCache;
  BatchState<Real> start = BatchState<Real>::zeros(layers, k, b);
  if (seq2seq) {
    start = forwardStack(*params.encoder, *encoderBatch, std::move(start), true, 1.0, nullptr, encCache);
  } else if (initialState) {
    start = *initialState;
  }

  StackCache<Real> decCache;
  BatchLoss<Real> out;
  out.finalState =
      forwardStack(dec, decoderBatch, start, false, options.dropoutKeep, options.rng, decCache);

  const bool dropout = options.dropoutKeep < 1.0;
  const Real invNorm = static_cast<Real>(1.0 / options.normalizer);
  std::vector<Matrix<Real>> dTop;
  if (grad) dTop.resize(static_cast<std::size_t>(decoderBatch.steps));

  for (int t = 0; t < decoderBatch.steps; ++t) {
    Matrix<Real> h = decCache.top[static_cast<std::size_t>(t)];
    Matrix<Real> outMask;
    if (dropout) {
      outMask = dropoutMask<Real>(k, b, options.dropoutKeep, *options.rng);
      h = h.cwiseProduct(outMask);
    }
    Matrix<Real> logits = params.output.weights * h;
    logits.colwise() += params.output.bias;
    const Eigen::Matrix<Real, 1, Eigen::Dynamic> mx = logits.colwise().maxCoeff();
    Matrix<Real> probs = (logits.rowwise() - mx).array().exp().matrix();
    const Eigen::Matrix<Real, 1, Eigen::Dynamic> sums = probs.colwise().sum();
    for (int j = 0; j < b; ++j) {
      if (!decoderBatch.active(t, j)) {
        probs.col(j).setZero();
        continue;
      }
      const TokenId target = decoderBatch.targets[decoderBatch.at(t, j)];
      if (target < 0 || target >= logits.rows()) {
        throw Error(ErrorCode::InvalidArgument, "target id " + std::to_string(target) + " out of range");
      }
      const double logp = static_cast<double>(logits(target, j)) - static_cast<double>(mx(j)) -
                          std::log(static_cast<double>(sums(j)));
      out.nll -= logp;
      ++out.tokens;
      if (grad) {
        probs.col(j) /= sums(j);
        probs(target, j) -= Real(1);
        probs.col(j) *= invNorm;
      }
    }
    if (grad) {
      grad->output.weights.noalias() += probs * h.transpose();
      grad->output.bias += probs.rowwise().sum();
      Matrix<Real> dh = params.output.weights.transpose() * probs;
      if (dropout) dh = dh.cwiseProduct(outMask);
      dTop[static_cast<std::size_t>(t)] = std::move(dh);
    }
  }
  out.loss = out.nll / options.normalizer;
  if (!grad) return out;

  auto dStart = backwardStack(dec, decoderBatch, decCache, dTop, BatchState<Real>::zeros(layers, k, b),
                              false, grad->decoder);
  if (seq2seq) {
    backwardStack(*params.encoder, *encoderBatch, encCache, {}, std::move(dStart), true, *grad->encoder);
  }
  return out;
}

template BatchLoss<float> batchLoss<float>(const ModelParams<float>&, const StepBatch*, const StepBatch&,
                                           const BatchState<float>*, const LossOptions&,
                                           ModelParams<float>*);
template BatchLoss<double> batchLoss<double>(const ModelParams<double>&, const StepBatch*,
                                             const StepBatch&, const BatchState<double>*,
                                             const LossOptions&, ModelParams<double>*);

}  // namespace craic::neural
