#include "craic/neural/gradient_check.hpp"

#include "craic/error.hpp"
#include "craic/neural/backprop.hpp"

#include <algorithm>
#include <cmath>

namespace craic::neural {

namespace {

struct Batches {
  StepBatch encoder;
  StepBatch decoder;
};

Batches packSample(const std::vector<PairExample>& sample) {
  std::vector<std::vector<TokenId>> methods, comments;
  for (const auto& p : sample) {
    methods.push_back(p.method);
    comments.push_back(p.comment);
  }
  return {packEncoderBatch(methods), packDecoderBatch(comments)};
}

}  // namespace

GradientCheckReport gradientCheck(const ModelParams<double>& params, const std::vector<PairExample>& sample,
                                  double step) {
  if (sample.empty()) throw Error(ErrorCode::ZeroLength, "gradient check needs at least one example");
  for (const auto& p : sample) {
    if (p.comment.empty()) throw Error(ErrorCode::ZeroLength, "gradient check got a zero-length comment");
  }
  const Batches batches = packSample(sample);
  const StepBatch* enc = params.kind() == ModelKind::Seq2Seq ? &batches.encoder : nullptr;

  ModelParams<double> grad = ModelParams<double>::zeros(params.shape());
  batchLoss<double>(params, enc, batches.decoder, nullptr, {}, &grad);

  ModelParams<double> probe = params;
  auto loss = [&] { return batchLoss<double>(probe, enc, batches.decoder, nullptr, {}, nullptr).loss; };

  std::vector<BlockRef<double>> probeBlocks;
  probe.forEachBlock([&](BlockRef<double> b) { probeBlocks.push_back(b); });
  std::vector<BlockRef<const double>> gradBlocks;
  grad.forEachBlock([&](BlockRef<const double> b) { gradBlocks.push_back(b); });

  GradientCheckReport report;
  for (std::size_t k = 0; k < probeBlocks.size(); ++k) {
    auto& block = probeBlocks[k];
    BlockCheck check;
    check.name = block.name;
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      const double saved = block.data[i];
      block.data[i] = saved + step;
      const double up = loss();
      block.data[i] = saved - step;
      const double down = loss();
      block.data[i] = saved;
      const double numeric = (up - down) / (2 * step);
      const double analytic = gradBlocks[k].data[i];
      const double err =
          std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      if (err > check.maxRelativeError || i == 0) {
        check.maxRelativeError = std::max(check.maxRelativeError, err);
        check.worstIndex = i;
        check.analytic = analytic;
        check.numeric = numeric;
      }
    }
    report.maxRelativeError = std::max(report.maxRelativeError, check.maxRelativeError);
    report.blocks.push_back(std::move(check));
  }
  return report;
}

GradientCheckReport gradientCheck(ModelKind kind, const ModelConfig& config,
                                  const std::vector<PairExample>& sample, double step) {
  if (config.hiddenSize > 16 || config.vocabSizeComment > 32 ||
      (kind == ModelKind::Seq2Seq && config.vocabSizeMethod > 32)) {
    throw Error(ErrorCode::InvalidArgument, "gradient check is limited to K <= 16 and V <= 32");
  }
  ModelShape shape;
  shape.kind = kind;
  shape.hidden = config.hiddenSize;
  shape.layers = config.layers;
  shape.vocabComment = config.vocabSizeComment;
  shape.vocabMethod = kind == ModelKind::Seq2Seq ? config.vocabSizeMethod : 0;
  Rng rng(config.seed);
  const auto params = ModelParams<double>::random(shape, rng, config.initScale, config.forgetBias);
  return gradientCheck(params, sample, step);
}

}  // namespace craic::neural
