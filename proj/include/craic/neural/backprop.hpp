#pragma once

#include "craic/neural/params.hpp"
#include "craic/vocab.hpp"

#include <cstdint>
#include <vector>

namespace craic::neural {

/// Time-major batch of token ids, element (t, b) at index t * batch + b.
/// Decoder batches carry targets; positions with mask 0 contribute no loss.
/// In encoder batches a masked position leaves that column's state untouched.
struct StepBatch {
  int steps = 0;
  int batch = 0;
  std::vector<TokenId> inputs;
  std::vector<TokenId> targets;
  std::vector<std::uint8_t> mask;

  std::size_t at(int t, int b) const { return static_cast<std::size_t>(t) * batch + b; }
  bool active(int t, int b) const { return mask[at(t, b)] != 0; }
};

/// Packs variable-length sequences, padding with PAD and mask 0.
StepBatch packEncoderBatch(const std::vector<std::vector<TokenId>>& sequences);
/// Teacher forcing: inputs BOS w1..wn, targets w1..wn EOS.
StepBatch packDecoderBatch(const std::vector<std::vector<TokenId>>& comments);

template <typename Real>
struct BatchState {
  std::vector<Matrix<Real>> h;  // per layer, K x B
  std::vector<Matrix<Real>> c;

  static BatchState zeros(int layers, Eigen::Index hidden, int batch) {
    BatchState s;
    for (int l = 0; l < layers; ++l) {
      s.h.push_back(Matrix<Real>::Zero(hidden, batch));
      s.c.push_back(Matrix<Real>::Zero(hidden, batch));
    }
    return s;
  }
};

struct LossOptions {
  /// Keep probability for dropout on decoder inputs, between layers and
  /// before the output layer. 1 disables dropout.
  double dropoutKeep = 1.0;
  Rng* rng = nullptr;
  /// Loss = summed token negative log-likelihood / normalizer.
  double normalizer = 1.0;
};

template <typename Real>
struct BatchLoss {
  double loss = 0;   // normalized
  double nll = 0;    // summed negative log-likelihood (nats)
  std::size_t tokens = 0;
  BatchState<Real> finalState;
};

/// Forward pass over one batch and, when `grad` is non-null, backpropagation
/// through time accumulating (+=) into `grad`. For a sequence-to-sequence
/// model `encoderBatch` is required and the decoder starts from the
/// encoder's final state; otherwise the decoder starts from `initialState`
/// (zeros when null).
template <typename Real>
BatchLoss<Real> batchLoss(const ModelParams<Real>& params, const StepBatch* encoderBatch,
                          const StepBatch& decoderBatch, const BatchState<Real>* initialState,
                          const LossOptions& options, ModelParams<Real>* grad);

extern template BatchLoss<float> batchLoss<float>(const ModelParams<float>&, const StepBatch*,
                                                  const StepBatch&, const BatchState<float>*,
                                                  const LossOptions&, ModelParams<float>*);
extern template BatchLoss<double> batchLoss<double>(const ModelParams<double>&, const StepBatch*,
                                                    const StepBatch&, const BatchState<double>*,
                                                    const LossOptions&, ModelParams<double>*);

}  // namespace craic::neural
