#pragma once

// Straight-line transcription of the LSTM cell and softmax output, written
// with plain loops over std::vector so it shares no code with the library.

#include "craic/neural/params.hpp"
#include "craic/vocab.hpp"

#include <cmath>
#include <vector>

namespace craic::testing {

struct ScalarState {
  std::vector<std::vector<double>> h, c;  // per layer
};

inline ScalarState scalarZeros(const neural::LstmStack<double>& s) {
  const auto k = static_cast<std::size_t>(s.hidden());
  return {std::vector<std::vector<double>>(s.layers.size(), std::vector<double>(k, 0.0)),
          std::vector<std::vector<double>>(s.layers.size(), std::vector<double>(k, 0.0))};
}

inline double scalarSigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline void scalarCell(const neural::LstmLayer<double>& layer, const std::vector<double>& x,
                       std::vector<double>& h, std::vector<double>& c) {
  const std::size_t k = h.size();
  const std::size_t in = x.size();
  std::vector<double> pre(4 * k);
  for (std::size_t r = 0; r < 4 * k; ++r) {
    double z = layer.bias(static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j < in; ++j) z += layer.weights(r, j) * x[j];
    for (std::size_t j = 0; j < k; ++j) z += layer.weights(r, in + j) * h[j];
    pre[r] = z;
  }
  for (std::size_t j = 0; j < k; ++j) {
    const double i = scalarSigmoid(pre[j]);
    const double f = scalarSigmoid(pre[k + j]);
    const double o = scalarSigmoid(pre[2 * k + j]);
    const double g = std::tanh(pre[3 * k + j]);
    c[j] = f * c[j] + i * g;
    h[j] = o * std::tanh(c[j]);
  }
}

inline void scalarStep(const neural::LstmStack<double>& s, ScalarState& state, TokenId id) {
  std::vector<double> x(static_cast<std::size_t>(s.hidden()));
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = s.embedding(id, j);
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    scalarCell(s.layers[l], x, state.h[l], state.c[l]);
    x = state.h[l];
  }
}

inline std::vector<double> scalarProbs(const neural::OutputLayer<double>& out, const std::vector<double>& h) {
  const auto v = static_cast<std::size_t>(out.bias.size());
  std::vector<double> p(v);
  double total = 0;
  for (std::size_t w = 0; w < v; ++w) {
    double z = out.bias(w);
    for (std::size_t j = 0; j < h.size(); ++j) z += out.weights(w, j) * h[j];
    p[w] = std::exp(z);
    total += p[w];
  }
  for (auto& x : p) x /= total;
  return p;
}

/// Product of per-step probabilities of ids[1..] (as a log), from `state`.
inline double scalarDecode(const neural::ModelParams<double>& m, ScalarState state, const std::vector<TokenId>& ids) {
  double prob = 1;
  for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
    scalarStep(m.decoder, state, ids[t]);
    prob *= scalarProbs(m.output, state.h.back())[ids[t + 1]];
  }
  return std::log(prob);
}

inline double scalarSeq2seq(const neural::ModelParams<double>& m, const std::vector<TokenId>& method,
                            const std::vector<TokenId>& comment) {
  auto state = scalarZeros(*m.encoder);
  for (TokenId id : method) scalarStep(*m.encoder, state, id);
  return scalarDecode(m, state, comment);
}

}  // namespace craic::testing
