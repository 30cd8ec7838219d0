#pragma once

#include "craic/neural/params.hpp"
#include "craic/vocab.hpp"

#include <span>

namespace craic::neural {

/// Hidden and cell vectors for every layer of a stack.
template <typename Real>
struct LstmState {
  std::vector<Vector<Real>> h;
  std::vector<Vector<Real>> c;

  static LstmState zeros(int layers, Eigen::Index hidden) {
    LstmState s;
    for (int l = 0; l < layers; ++l) {
      s.h.push_back(Vector<Real>::Zero(hidden));
      s.c.push_back(Vector<Real>::Zero(hidden));
    }
    return s;
  }
  const Vector<Real>& top() const { return h.back(); }
};

/// One step of a single layer:
///   i, f, o = sigmoid(W_{i,f,o} [x; h_prev] + b),  g = tanh(W_g [x; h_prev] + b_g)
///   c = f * c_prev + i * g,  h = o * tanh(c)
/// Throws NonFiniteState when the result is not finite.
template <typename Real>
void lstmLayerStep(const LstmLayer<Real>& layer, const Vector<Real>& x, const Vector<Real>& hPrev,
                   const Vector<Real>& cPrev, Vector<Real>& h, Vector<Real>& c);

/// Embeds `inputId` and advances every layer of the stack.
template <typename Real>
LstmState<Real> lstmStep(const LstmStack<Real>& stack, const LstmState<Real>& prev, TokenId inputId);

/// softmax(W h + b).
template <typename Real>
Vector<double> vocabDist(const OutputLayer<Real>& output, const Vector<Real>& h);

/// log softmax(W h + b), computed in double.
template <typename Real>
Vector<double> logVocabDist(const OutputLayer<Real>& output, const Vector<Real>& h);

/// Natural-log probability of ids[1..] given the prefix, starting from `init`.
/// ids must begin with BOS; every later id, EOS included, is predicted once.
template <typename Real>
double decodeLogProb(const ModelParams<Real>& params, const LstmState<Real>& init,
                     std::span<const TokenId> ids);

template <typename Real>
double lmLogProb(const ModelParams<Real>& params, std::span<const TokenId> commentIds);

/// Runs the encoder over the method ids; zero state when there are none.
template <typename Real>
LstmState<Real> encode(const ModelParams<Real>& params, std::span<const TokenId> methodIds);

struct Seq2SeqScore {
  double logProb = 0;
  bool emptyMethod = false;
};

template <typename Real>
Seq2SeqScore seq2seqLogProb(const ModelParams<Real>& params, std::span<const TokenId> methodIds,
                            std::span<const TokenId> commentIds);

}  // namespace craic::neural
