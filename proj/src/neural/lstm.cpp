#include "craic/neural/lstm.hpp"

#include "craic/error.hpp"

#include <cmath>

namespace craic::neural {

namespace {

template <typename Real>
Real sigmoid(Real z) {
  return Real(1) / (Real(1) + std::exp(-z));
}

void checkId(TokenId id, Eigen::Index vocab, const char* what) {
  if (id < 0 || id >= vocab) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " id " + std::to_string(id) + " outside vocabulary of " +
                    std::to_string(vocab));
  }
}

}  // namespace

template <typename Real>
void lstmLayerStep(const LstmLayer<Real>& layer, const Vector<Real>& x, const Vector<Real>& hPrev,
                   const Vector<Real>& cPrev, Vector<Real>& h, Vector<Real>& c) {
  const Eigen::Index k = layer.hidden();
  Vector<Real> a(x.size() + k);
  a << x, hPrev;
  const Vector<Real> z = layer.weights * a + layer.bias;
  const Vector<Real> in = z.segment(0, k).unaryExpr([](Real v) { return sigmoid(v); });
  const Vector<Real> forget = z.segment(k, k).unaryExpr([](Real v) { return sigmoid(v); });
  const Vector<Real> out = z.segment(2 * k, k).unaryExpr([](Real v) { return sigmoid(v); });
  const Vector<Real> cand = z.segment(3 * k, k).array().tanh();
  c = forget.cwiseProduct(cPrev) + in.cwiseProduct(cand);
  h = out.cwiseProduct(Vector<Real>(c.array().tanh()));
  if (!h.allFinite() || !c.allFinite()) {
    throw Error(ErrorCode::NonFiniteState,
                "LSTM state became non-finite (|h_prev|=" + std::to_string(double(hPrev.norm())) +
                    ", |c_prev|=" + std::to_string(double(cPrev.norm())) + ")");
  }
}

template <typename Real>
LstmState<Real> lstmStep(const LstmStack<Real>& stack, const LstmState<Real>& prev, TokenId inputId) {
  checkId(inputId, stack.vocabSize(), "input");
  LstmState<Real> next = prev;
  Vector<Real> x = stack.embedding.row(inputId).transpose();
  for (std::size_t l = 0; l < stack.layers.size(); ++l) {
    lstmLayerStep(stack.layers[l], x, prev.h[l], prev.c[l], next.h[l], next.c[l]);
    x = next.h[l];
  }
  return next;
}

template <typename Real>
Vector<double> logVocabDist(const OutputLayer<Real>& output, const Vector<Real>& h) {
  const Vector<double> logits = (output.weights * h + output.bias).template cast<double>();
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix();
}

template <typename Real>
Vector<double> vocabDist(const OutputLayer<Real>& output, const Vector<Real>& h) {
  return logVocabDist(output, h).array().exp().matrix();
}

template <typename Real>
double decodeLogProb(const ModelParams<Real>& params, const LstmState<Real>& init,
                     std::span<const TokenId> ids) {
  if (ids.size() < 2) throw Error(ErrorCode::ZeroLength, "sequence has nothing to predict");
  const auto vocab = params.decoder.vocabSize();
  LstmState<Real> state = init;
  double total = 0;
  for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
    state = lstmStep(params.decoder, state, ids[t]);
    checkId(ids[t + 1], vocab, "target");
    total += logVocabDist(params.output, state.top())(ids[t + 1]);
  }
  return total;
}

template <typename Real>
double lmLogProb(const ModelParams<Real>& params, std::span<const TokenId> commentIds) {
  const auto& d = params.decoder;
  return decodeLogProb(params, LstmState<Real>::zeros(static_cast<int>(d.layers.size()), d.hidden()),
                       commentIds);
}

template <typename Real>
LstmState<Real> encode(const ModelParams<Real>& params, std::span<const TokenId> methodIds) {
  if (!params.encoder) throw Error(ErrorCode::InvalidArgument, "model has no encoder");
  const auto& e = *params.encoder;
  auto state = LstmState<Real>::zeros(static_cast<int>(e.layers.size()), e.hidden());
  for (TokenId id : methodIds) state = lstmStep(e, state, id);
  return state;
}

template <typename Real>
Seq2SeqScore seq2seqLogProb(const ModelParams<Real>& params, std::span<const TokenId> methodIds,
                            std::span<const TokenId> commentIds) {
  Seq2SeqScore s;
  s.emptyMethod = methodIds.empty();
  s.logProb = decodeLogProb(params, encode(params, methodIds), commentIds);
  return s;
}

#define CRAIC_INSTANTIATE(Real)                                                                   \
  template void lstmLayerStep<Real>(const LstmLayer<Real>&, const Vector<Real>&,                 \
                                    const Vector<Real>&, const Vector<Real>&, Vector<Real>&,     \
                                    Vector<Real>&);                                              \
  template LstmState<Real> lstmStep<Real>(const LstmStack<Real>&, const LstmState<Real>&, TokenId); \
  template Vector<double> vocabDist<Real>(const OutputLayer<Real>&, const Vector<Real>&);        \
  template Vector<double> logVocabDist<Real>(const OutputLayer<Real>&, const Vector<Real>&);     \
  template double decodeLogProb<Real>(const ModelParams<Real>&, const LstmState<Real>&,          \
                                      std::span<const TokenId>);                                 \
  template double lmLogProb<Real>(const ModelParams<Real>&, std::span<const TokenId>);           \
  template LstmState<Real> encode<Real>(const ModelParams<Real>&, std::span<const TokenId>);     \
  template Seq2SeqScore seq2seqLogProb<Real>(const ModelParams<Real>&, std::span<const TokenId>, \
                                             std::span<const TokenId>);

CRAIC_INSTANTIATE(float)
CRAIC_INSTANTIATE(double)
#undef CRAIC_INSTANTIATE

}  // namespace craic::neural
