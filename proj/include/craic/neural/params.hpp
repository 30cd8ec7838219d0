#pragma once

#include "craic/rng.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace craic::neural {

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Row-block order of the stacked gate weights.
enum class Gate : int { Input = 0, Forget = 1, Output = 2, Candidate = 3 };
inline constexpr int kGateCount = 4;

const char* gateName(Gate gate);

/// One LSTM layer. The four gate maps over [x; h_prev] are stacked row-wise
/// into a single 4K x (inputDim + K) matrix: input, forget, output,
/// candidate.
template <typename Real>
struct LstmLayer {
  Matrix<Real> weights;
  Vector<Real> bias;

  Eigen::Index hidden() const { return bias.size() / kGateCount; }
  Eigen::Index inputDim() const { return weights.cols() - hidden(); }
  auto gateWeights(Gate g) { return weights.middleRows(static_cast<int>(g) * hidden(), hidden()); }
  auto gateWeights(Gate g) const { return weights.middleRows(static_cast<int>(g) * hidden(), hidden()); }
  auto gateBias(Gate g) { return bias.segment(static_cast<int>(g) * hidden(), hidden()); }
  auto gateBias(Gate g) const { return bias.segment(static_cast<int>(g) * hidden(), hidden()); }
};

/// Embedding table (V x K, one row per token) feeding a stack of layers.
template <typename Real>
struct LstmStack {
  Matrix<Real> embedding;
  std::vector<LstmLayer<Real>> layers;

  Eigen::Index hidden() const { return embedding.cols(); }
  Eigen::Index vocabSize() const { return embedding.rows(); }
};

/// Affine map from the top hidden state to vocabulary logits.
template <typename Real>
struct OutputLayer {
  Matrix<Real> weights;  // V x K
  Vector<Real> bias;     // V
};

enum class ModelKind { LanguageModel, Seq2Seq };

const char* modelKindName(ModelKind kind);
ModelKind parseModelKind(const std::string& name);

struct ModelShape {
  ModelKind kind = ModelKind::LanguageModel;
  int hidden = 8;
  int layers = 1;
  int vocabMethod = 0;  // ignored for language models
  int vocabComment = 0;
};

/// View of one contiguous parameter block (column-major storage).
template <typename Real>
struct BlockRef {
  std::string name;
  Real* data;
  Eigen::Index rows;
  Eigen::Index cols;
  Eigen::Index size() const { return rows * cols; }
};

/// Parameters of either model. A language model is the decoder stack plus
/// the output layer; a sequence-to-sequence model adds an encoder stack whose
/// final state initializes the decoder.
template <typename Real>
struct ModelParams {
  std::optional<LstmStack<Real>> encoder;
  LstmStack<Real> decoder;
  OutputLayer<Real> output;

  ModelKind kind() const { return encoder ? ModelKind::Seq2Seq : ModelKind::LanguageModel; }
  ModelShape shape() const;

  static ModelParams zeros(const ModelShape& shape);
  /// Uniform(-scale, scale) everywhere, forget-gate biases set to forgetBias.
  static ModelParams random(const ModelShape& shape, Rng& rng, double scale, double forgetBias);

  /// Visits every block in a fixed order.
  void forEachBlock(const std::function<void(BlockRef<Real>)>& fn);
  void forEachBlock(const std::function<void(BlockRef<const Real>)>& fn) const;

  void setZero();
  bool allFinite() const;

  template <typename Other>
  ModelParams<Other> cast() const;
};

template <typename Real>
template <typename Other>
ModelParams<Other> ModelParams<Real>::cast() const {
  auto castStack = [](const LstmStack<Real>& s) {
    LstmStack<Other> out;
    out.embedding = s.embedding.template cast<Other>();
    for (const auto& l : s.layers) {
      out.layers.push_back({l.weights.template cast<Other>(), l.bias.template cast<Other>()});
    }
    return out;
  };
  ModelParams<Other> out;
  if (encoder) out.encoder = castStack(*encoder);
  out.decoder = castStack(decoder);
  out.output.weights = output.weights.template cast<Other>();
  out.output.bias = output.bias.template cast<Other>();
  return out;
}

extern template struct ModelParams<float>;
extern template struct ModelParams<double>;

}  // namespace craic::neural
