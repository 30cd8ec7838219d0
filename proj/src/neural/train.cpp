#include "craic/neural/train.hpp"

#include "craic/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace craic::neural {

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
  if (hiddenSize < 1) fail("hidden size must be positive");
  if (layers < 1) fail("layer count must be positive");
  if (vocabSizeMethod < 5 || vocabSizeComment < 5) fail("vocabulary sizes must be at least 5");
  if (!(learningRate > 0)) fail("learning rate must be positive");
  if (!(decayFactor > 0 && decayFactor <= 1)) fail("decay factor must be in (0, 1]");
  if (batchSize < 1) fail("batch size must be positive");
  if (!(dropoutKeep > 0 && dropoutKeep <= 1)) fail("dropout probability must be in [0, 1)");
  if (!(clipNorm > 0)) fail("clip norm must be positive");
  if (tbpttSteps < 1) fail("truncation length must be positive");
  if (maxEpochs < 0) fail("epoch count must not be negative");
  if (!(initScale >= 0)) fail("init scale must not be negative");
}

ModelConfig ModelConfig::desk(ModelKind kind) {
  ModelConfig c;
  c.hiddenSize = kind == ModelKind::Seq2Seq ? 64 : 128;
  return c;
}

ModelConfig ModelConfig::full(ModelKind kind) {
  ModelConfig c;
  c.hiddenSize = kind == ModelKind::Seq2Seq ? 512 : 2048;
  c.vocabSizeMethod = 25000;
  c.vocabSizeComment = 25000;
  return c;
}

bool LrSchedule::update(double validPerplexity) {
  if (validPerplexity < best_) {
    best_ = validPerplexity;
    return true;
  }
  lr_ *= decay_;
  return false;
}

template <typename Real>
double gradientNorm(const ModelParams<Real>& grad) {
  double sq = 0;
  grad.forEachBlock([&](BlockRef<const Real> b) {
    for (Eigen::Index i = 0; i < b.size(); ++i) sq += double(b.data[i]) * double(b.data[i]);
  });
  return std::sqrt(sq);
}

template <typename Real>
double clipGradients(ModelParams<Real>& grad, double clipNorm) {
  const double norm = gradientNorm(grad);
  if (norm > clipNorm) {
    const double scale = clipNorm / norm;
    grad.forEachBlock([&](BlockRef<Real> b) {
      for (Eigen::Index i = 0; i < b.size(); ++i) b.data[i] = static_cast<Real>(b.data[i] * scale);
    });
  }
  return norm;
}

template <typename Real>
void sgdStep(ModelParams<Real>& params, const ModelParams<Real>& grad, double lr) {
  std::vector<const Real*> g;
  grad.forEachBlock([&](BlockRef<const Real> b) { g.push_back(b.data); });
  std::size_t k = 0;
  const Real rate = static_cast<Real>(lr);
  params.forEachBlock([&](BlockRef<Real> b) {
    const Real* src = g.at(k++);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data[i] -= rate * src[i];
  });
}

template double gradientNorm<float>(const ModelParams<float>&);
template double gradientNorm<double>(const ModelParams<double>&);
template double clipGradients<float>(ModelParams<float>&, double);
template double clipGradients<double>(ModelParams<double>&, double);
template void sgdStep<float>(ModelParams<float>&, const ModelParams<float>&, double);
template void sgdStep<double>(ModelParams<double>&, const ModelParams<double>&, double);

std::vector<StepBatch> lmWindows(const std::vector<std::vector<TokenId>>& sentences, int streams,
                                 int steps) {
  std::vector<TokenId> flat;
  for (const auto& s : sentences) {
    flat.push_back(kBos);
    flat.insert(flat.end(), s.begin(), s.end());
    flat.push_back(kEos);
  }
  std::vector<StepBatch> out;
  if (flat.size() < 2) return out;
  const std::size_t predictions = flat.size() - 1;
  const int rows = static_cast<int>(std::clamp<std::size_t>(static_cast<std::size_t>(streams), 1, predictions));
  const std::size_t rowLen = predictions / static_cast<std::size_t>(rows);
  for (std::size_t start = 0; start < rowLen; start += static_cast<std::size_t>(steps)) {
    StepBatch w;
    w.batch = rows;
    w.steps = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(steps), rowLen - start));
    const std::size_t n = static_cast<std::size_t>(w.steps) * rows;
    w.inputs.resize(n);
    w.targets.resize(n);
    w.mask.resize(n);
    for (int t = 0; t < w.steps; ++t) {
      for (int b = 0; b < rows; ++b) {
        const std::size_t pos = static_cast<std::size_t>(b) * rowLen + start + static_cast<std::size_t>(t);
        w.inputs[w.at(t, b)] = flat[pos];
        w.targets[w.at(t, b)] = flat[pos + 1];
        w.mask[w.at(t, b)] = flat[pos + 1] != kBos;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

double lmPerplexity(const ModelParams<float>& params, const std::vector<std::vector<TokenId>>& sentences,
                    int batchSize) {
  double nll = 0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < sentences.size(); i += static_cast<std::size_t>(batchSize)) {
    const auto end = std::min(sentences.size(), i + static_cast<std::size_t>(batchSize));
    const std::vector<std::vector<TokenId>> chunk(sentences.begin() + static_cast<long>(i),
                                                  sentences.begin() + static_cast<long>(end));
    const auto r = batchLoss<float>(params, nullptr, packDecoderBatch(chunk), nullptr, {}, nullptr);
    nll += r.nll;
    tokens += r.tokens;
  }
  if (tokens == 0) throw Error(ErrorCode::EmptyCorpus, "no sentences to evaluate");
  return std::exp(nll / static_cast<double>(tokens));
}

double seq2seqPerplexity(const ModelParams<float>& params, const std::vector<PairExample>& pairs,
                         int batchSize) {
  double nll = 0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < pairs.size(); i += static_cast<std::size_t>(batchSize)) {
    const auto end = std::min(pairs.size(), i + static_cast<std::size_t>(batchSize));
    std::vector<std::vector<TokenId>> methods, comments;
    for (std::size_t j = i; j < end; ++j) {
      methods.push_back(pairs[j].method);
      comments.push_back(pairs[j].comment);
    }
    const auto enc = packEncoderBatch(methods);
    const auto r = batchLoss<float>(params, &enc, packDecoderBatch(comments), nullptr, {}, nullptr);
    nll += r.nll;
    tokens += r.tokens;
  }
  if (tokens == 0) throw Error(ErrorCode::EmptyCorpus, "no pairs to evaluate");
  return std::exp(nll / static_cast<double>(tokens));
}

namespace {

Rng epochRng(std::uint64_t seed, int epoch) {
  return Rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch));
}

struct EpochTotals {
  double nll = 0;
  std::size_t tokens = 0;
};

/// Shared epoch loop. `runEpoch` trains one epoch in place and returns the
/// training totals; `evaluate` gives the validation perplexity.
template <typename RunEpoch, typename Evaluate>
TrainResult trainLoop(ModelShape shape, const ModelConfig& config,
                      const std::optional<ResumePoint>& resume, const EpochCallback& onEpoch,
                      RunEpoch&& runEpoch, Evaluate&& evaluate) {
  config.validate();
  TrainResult result;
  LrSchedule schedule(config.learningRate, config.decayFactor);
  ModelParams<float> params;
  int firstEpoch = 1;
  if (resume) {
    if (resume->params.shape().kind != shape.kind || resume->params.shape().hidden != shape.hidden ||
        resume->params.shape().vocabComment != shape.vocabComment ||
        resume->params.shape().vocabMethod != shape.vocabMethod ||
        resume->params.shape().layers != shape.layers) {
      throw Error(ErrorCode::ConfigInvalid, "resume checkpoint does not match the model shape");
    }
    params = resume->params;
    result.best = resume->best;
    result.bestEpoch = resume->bestEpoch;
    result.bestValid = resume->bestValid;
    schedule.restore(resume->learningRate, resume->bestValid);
    firstEpoch = resume->epoch + 1;
  } else {
    Rng init(config.seed);
    params = ModelParams<float>::random(shape, init, config.initScale, config.forgetBias);
    result.best = params;
    result.bestValid = std::numeric_limits<double>::infinity();
  }
  result.epochs = firstEpoch - 1;

  ModelParams<float> grad = ModelParams<float>::zeros(shape);
  for (int epoch = firstEpoch; epoch <= config.maxEpochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    Rng rng = epochRng(config.seed, epoch);
    EpochStats stats;
    stats.epoch = epoch;
    stats.learningRate = schedule.rate();
    const EpochTotals totals = runEpoch(params, grad, rng, schedule.rate());
    stats.trainPerplexity =
        totals.tokens ? std::exp(totals.nll / static_cast<double>(totals.tokens)) : 0.0;
    stats.validPerplexity = evaluate(params);
    if (!std::isfinite(stats.validPerplexity) || !std::isfinite(stats.trainPerplexity) ||
        !params.allFinite()) {
      throw Error(ErrorCode::DivergenceDetected,
                  "training diverged in epoch " + std::to_string(epoch) +
                      " (valid perplexity " + std::to_string(stats.validPerplexity) + ")");
    }
    stats.improved = schedule.update(stats.validPerplexity);
    if (stats.improved) {
      result.best = params;
      result.bestEpoch = epoch;
      result.bestValid = stats.validPerplexity;
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.history.push_back(stats);
    result.epochs = epoch;
    if (onEpoch) onEpoch(stats);
  }
  if (result.bestEpoch == 0 && !resume) result.bestValid = evaluate(params);
  result.last = std::move(params);
  result.learningRate = schedule.rate();
  return result;
}

}  // namespace

TrainResult trainLm(const LmCorpus& corpus, const ModelConfig& config,
                    const std::optional<ResumePoint>& resume, const EpochCallback& onEpoch) {
  if (corpus.train.empty()) throw Error(ErrorCode::EmptyCorpus, "no training sentences");
  ModelShape shape;
  shape.kind = ModelKind::LanguageModel;
  shape.hidden = config.hiddenSize;
  shape.layers = config.layers;
  shape.vocabComment = config.vocabSizeComment;
  const auto& validSet = corpus.valid.empty() ? corpus.train : corpus.valid;

  auto runEpoch = [&](ModelParams<float>& params, ModelParams<float>& grad, Rng& rng, double lr) {
    std::vector<std::vector<TokenId>> order = corpus.train;
    rng.shuffle(order);
    const auto windows = lmWindows(order, config.batchSize, config.tbpttSteps);
    EpochTotals totals;
    if (windows.empty()) return totals;
    auto state = BatchState<float>::zeros(config.layers, config.hiddenSize, windows.front().batch);
    LossOptions opts;
    opts.dropoutKeep = config.dropoutKeep;
    opts.rng = &rng;
    opts.normalizer = windows.front().batch;
    for (const auto& w : windows) {
      grad.setZero();
      auto r = batchLoss<float>(params, nullptr, w, &state, opts, &grad);
      state = std::move(r.finalState);
      totals.nll += r.nll;
      totals.tokens += r.tokens;
      clipGradients(grad, config.clipNorm);
      sgdStep(params, grad, lr);
    }
    return totals;
  };
  auto evaluate = [&](const ModelParams<float>& params) {
    return lmPerplexity(params, validSet, config.batchSize);
  };
  return trainLoop(shape, config, resume, onEpoch, runEpoch, evaluate);
}

TrainResult trainSeq2seq(const PairCorpus& corpus, const ModelConfig& config,
                         const std::optional<ResumePoint>& resume, const EpochCallback& onEpoch) {
  if (corpus.train.empty()) throw Error(ErrorCode::EmptyCorpus, "no training pairs");
  ModelShape shape;
  shape.kind = ModelKind::Seq2Seq;
  shape.hidden = config.hiddenSize;
  shape.layers = config.layers;
  shape.vocabMethod = config.vocabSizeMethod;
  shape.vocabComment = config.vocabSizeComment;
  const auto& validSet = corpus.valid.empty() ? corpus.train : corpus.valid;

  auto runEpoch = [&](ModelParams<float>& params, ModelParams<float>& grad, Rng& rng, double lr) {
    std::vector<std::size_t> order(corpus.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    EpochTotals totals;
    LossOptions opts;
    opts.dropoutKeep = config.dropoutKeep;
    opts.rng = &rng;
    const auto batch = static_cast<std::size_t>(config.batchSize);
    for (std::size_t i = 0; i < order.size(); i += batch) {
      const auto end = std::min(order.size(), i + batch);
      std::vector<std::vector<TokenId>> methods, comments;
      for (std::size_t j = i; j < end; ++j) {
        methods.push_back(corpus.train[order[j]].method);
        comments.push_back(corpus.train[order[j]].comment);
      }
      const auto enc = packEncoderBatch(methods);
      const auto dec = packDecoderBatch(comments);
      opts.normalizer = static_cast<double>(end - i);
      grad.setZero();
      const auto r = batchLoss<float>(params, &enc, dec, nullptr, opts, &grad);
      totals.nll += r.nll;
      totals.tokens += r.tokens;
      clipGradients(grad, config.clipNorm);
      sgdStep(params, grad, lr);
    }
    return totals;
  };
  auto evaluate = [&](const ModelParams<float>& params) {
    return seq2seqPerplexity(params, validSet, config.batchSize);
  };
  return trainLoop(shape, config, resume, onEpoch, runEpoch, evaluate);
}

}  // namespace craic::neural
