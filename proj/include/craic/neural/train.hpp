#pragma once

#include "craic/neural/backprop.hpp"
#include "craic/neural/params.hpp"
#include "craic/vocab.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace craic::neural {

struct ModelConfig {
  int hiddenSize = 128;
  int layers = 1;
  int vocabSizeMethod = 2000;
  int vocabSizeComment = 2000;
  double learningRate = 0.5;
  double decayFactor = 0.96;
  int batchSize = 64;
  /// Keep probability. The alternative reading of the configured dropout
  /// value as a drop rate is available through setDropProbability.
  double dropoutKeep = 0.65;
  double clipNorm = 5.0;
  int tbpttSteps = 30;
  int maxEpochs = 30;
  std::uint64_t seed = 1;
  double initScale = 0.5;
  double forgetBias = 1.0;

  double dropProbability() const { return 1.0 - dropoutKeep; }
  void setDropProbability(double p) { dropoutKeep = 1.0 - p; }

  /// Throws ConfigInvalid when a field is out of range.
  void validate() const;

  /// Small defaults meant for a laptop: K=64 for seq2seq, K=128 for the LM.
  static ModelConfig desk(ModelKind kind);
  /// Full-scale constants: K=512 for seq2seq, K=2048 for the LM, V=25000.
  static ModelConfig full(ModelKind kind);
};

/// Multiplies the rate by the decay factor after every epoch whose
/// validation perplexity does not beat the best seen so far.
class LrSchedule {
 public:
  LrSchedule(double initial, double decay) : lr_(initial), decay_(decay) {}
  /// Records one epoch. Returns true when it improved on the best.
  bool update(double validPerplexity);
  double rate() const { return lr_; }
  double best() const { return best_; }
  void restore(double rate, double best) {
    lr_ = rate;
    best_ = best;
  }

 private:
  double lr_;
  double decay_;
  double best_ = std::numeric_limits<double>::infinity();
};

/// Scales `grad` so that its global L2 norm is at most clipNorm. Returns the
/// norm before clipping.
template <typename Real>
double clipGradients(ModelParams<Real>& grad, double clipNorm);

template <typename Real>
double gradientNorm(const ModelParams<Real>& grad);

/// params -= lr * grad.
template <typename Real>
void sgdStep(ModelParams<Real>& params, const ModelParams<Real>& grad, double lr);

struct EpochStats {
  int epoch = 0;  // 1-based
  double learningRate = 0;
  double trainPerplexity = 0;
  double validPerplexity = 0;
  bool improved = false;
  double seconds = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// Where to pick training back up: the parameters after `epoch` epochs
/// and the schedule state at that point.
struct ResumePoint {
  ModelParams<float> params;
  ModelParams<float> best;
  int epoch = 0;
  double learningRate = 0;
  double bestValid = std::numeric_limits<double>::infinity();
  int bestEpoch = 0;
};

struct TrainResult {
  ModelParams<float> best;   // lowest validation perplexity
  ModelParams<float> last;   // after the final epoch
  int bestEpoch = 0;
  double bestValid = 0;
  int epochs = 0;
  double learningRate = 0;   // rate after the final epoch
  std::vector<EpochStats> history;
};

/// Comment sentences as token ids, without BOS/EOS.
struct LmCorpus {
  std::vector<std::vector<TokenId>> train;
  std::vector<std::vector<TokenId>> valid;
};

struct PairExample {
  std::vector<TokenId> method;
  std::vector<TokenId> comment;  // without BOS/EOS
};

struct PairCorpus {
  std::vector<PairExample> train;
  std::vector<PairExample> valid;
};

/// Builds the BOS w1..wn EOS streams used for LM training, split into
/// `streams` parallel rows and cut into windows of `steps`. Positions that
/// would predict a sentence-opening BOS are masked out.
std::vector<StepBatch> lmWindows(const std::vector<std::vector<TokenId>>& sentences, int streams,
                                 int steps);

TrainResult trainLm(const LmCorpus& corpus, const ModelConfig& config,
                    const std::optional<ResumePoint>& resume = std::nullopt,
                    const EpochCallback& onEpoch = {});

TrainResult trainSeq2seq(const PairCorpus& corpus, const ModelConfig& config,
                         const std::optional<ResumePoint>& resume = std::nullopt,
                         const EpochCallback& onEpoch = {});

/// Micro-averaged perplexity with every sentence scored from a zero state
/// (or the encoder's state for seq2seq), dropout off.
double lmPerplexity(const ModelParams<float>& params, const std::vector<std::vector<TokenId>>& sentences,
                    int batchSize = 64);
double seq2seqPerplexity(const ModelParams<float>& params, const std::vector<PairExample>& pairs,
                         int batchSize = 64);

}  // namespace craic::neural
