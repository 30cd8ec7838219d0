#include "craic/neural/params.hpp"

#include "craic/error.hpp"

namespace craic::neural {

const char* gateName(Gate gate) {
  switch (gate) {
    case Gate::Input: return "input";
    case Gate::Forget: return "forget";
    case Gate::Output: return "output";
    case Gate::Candidate: return "candidate";
  }
  return "input";
}

const char* modelKindName(ModelKind kind) {
  return kind == ModelKind::Seq2Seq ? "seq2seq" : "lm";
}

ModelKind parseModelKind(const std::string& name) {
  if (name == "lm") return ModelKind::LanguageModel;
  if (name == "seq2seq" || name == "s2s") return ModelKind::Seq2Seq;
  throw Error(ErrorCode::ConfigInvalid, "unknown model kind '" + name + "'");
}

namespace {

template <typename Real>
LstmStack<Real> zeroStack(int vocab, int hidden, int layers) {
  LstmStack<Real> s;
  s.embedding = Matrix<Real>::Zero(vocab, hidden);
  for (int l = 0; l < layers; ++l) {
    s.layers.push_back({Matrix<Real>::Zero(kGateCount * hidden, 2 * hidden),
                        Vector<Real>::Zero(kGateCount * hidden)});
  }
  return s;
}

template <typename Real, typename Fn>
void visitStack(const std::string& prefix, LstmStack<Real>& s, Fn&& fn) {
  fn(BlockRef<Real>{prefix + ".embedding", s.embedding.data(), s.embedding.rows(), s.embedding.cols()});
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    auto& layer = s.layers[l];
    const std::string p = prefix + ".l" + std::to_string(l);
    fn(BlockRef<Real>{p + ".weights", layer.weights.data(), layer.weights.rows(), layer.weights.cols()});
    fn(BlockRef<Real>{p + ".bias", layer.bias.data(), layer.bias.rows(), 1});
  }
}

}  // namespace

template <typename Real>
ModelShape ModelParams<Real>::shape() const {
  ModelShape s;
  s.kind = kind();
  s.hidden = static_cast<int>(decoder.hidden());
  s.layers = static_cast<int>(decoder.layers.size());
  s.vocabComment = static_cast<int>(decoder.vocabSize());
  s.vocabMethod = encoder ? static_cast<int>(encoder->vocabSize()) : 0;
  return s;
}

template <typename Real>
ModelParams<Real> ModelParams<Real>::zeros(const ModelShape& shape) {
  if (shape.hidden < 1 || shape.layers < 1 || shape.vocabComment < 1 ||
      (shape.kind == ModelKind::Seq2Seq && shape.vocabMethod < 1)) {
    throw Error(ErrorCode::ConfigInvalid, "model dimensions must be positive");
  }
  ModelParams p;
  if (shape.kind == ModelKind::Seq2Seq) {
    p.encoder = zeroStack<Real>(shape.vocabMethod, shape.hidden, shape.layers);
  }
  p.decoder = zeroStack<Real>(shape.vocabComment, shape.hidden, shape.layers);
  p.output.weights = Matrix<Real>::Zero(shape.vocabComment, shape.hidden);
  p.output.bias = Vector<Real>::Zero(shape.vocabComment);
  return p;
}

template <typename Real>
ModelParams<Real> ModelParams<Real>::random(const ModelShape& shape, Rng& rng, double scale,
                                            double forgetBias) {
  ModelParams p = zeros(shape);
  p.forEachBlock([&](BlockRef<Real> b) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data[i] = static_cast<Real>(rng.uniform(-scale, scale));
  });
  auto setForget = [&](LstmStack<Real>& s) {
    for (auto& layer : s.layers) layer.gateBias(Gate::Forget).setConstant(static_cast<Real>(forgetBias));
  };
  if (p.encoder) setForget(*p.encoder);
  setForget(p.decoder);
  return p;
}

template <typename Real>
void ModelParams<Real>::forEachBlock(const std::function<void(BlockRef<Real>)>& fn) {
  if (encoder) visitStack("encoder", *encoder, fn);
  visitStack("decoder", decoder, fn);
  fn(BlockRef<Real>{"output.weights", output.weights.data(), output.weights.rows(), output.weights.cols()});
  fn(BlockRef<Real>{"output.bias", output.bias.data(), output.bias.rows(), 1});
}

template <typename Real>
void ModelParams<Real>::forEachBlock(const std::function<void(BlockRef<const Real>)>& fn) const {
  const_cast<ModelParams*>(this)->forEachBlock([&](BlockRef<Real> b) {
    fn(BlockRef<const Real>{std::move(b.name), b.data, b.rows, b.cols});
  });
}

template <typename Real>
void ModelParams<Real>::setZero() {
  forEachBlock([](BlockRef<Real> b) { std::fill(b.data, b.data + b.size(), Real(0)); });
}

template <typename Real>
bool ModelParams<Real>::allFinite() const {
  bool ok = true;
  forEachBlock([&](BlockRef<const Real> b) {
    for (Eigen::Index i = 0; i < b.size() && ok; ++i) ok = std::isfinite(b.data[i]);
  });
  return ok;
}

template struct ModelParams<float>;
template struct ModelParams<double>;

}  // namespace craic::neural
