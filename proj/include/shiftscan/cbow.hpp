#pragma once

#include <cstdint>
#include <vector>

#include "shiftscan/conllu.hpp"
#include "shiftscan/embedding.hpp"
#include "shiftscan/trainconfig.hpp"

namespace shiftscan {

struct TrainStats {
  std::vector<double> epoch_loss;  // mean step objective per epoch
  std::uint64_t steps = 0;         // positions with a non-empty context
};

/// Tokens with frequency >= min_count, descending frequency, ties by token.
Vocabulary build_vocab(const TimeBinCorpus& corpus, std::uint64_t min_count);

/// Train from scratch on one time bin. Deterministic (bit-reproducible) when
/// config.workers == 1; workers > 1 runs lock-free parallel updates whose
/// result depends on scheduling.
EmbeddingModel train_static(const TimeBinCorpus& corpus, const TrainConfig& config,
                            TrainStats* stats = nullptr);

/// Continue training from a previous bin's model: vocabulary becomes the
/// union of prev's and the new corpus's filtered vocabulary, shared tokens
/// keep prev's input and output vectors, and training runs on the new
/// corpus only.
EmbeddingModel train_incremental(const EmbeddingModel& prev, const TimeBinCorpus& corpus,
                                 const TrainConfig& config, TrainStats* stats = nullptr);

// --- step-level pieces, exposed so the gradient math is testable ---

/// Negative-sampling objective of one CBOW step:
///   -log sigmoid(h . out[positive]) - sum_neg log sigmoid(-h . out[neg])
/// with h the mean of input vectors of `context`.
double cbow_step_loss(const Matrix& input_vecs, const Matrix& output_vecs,
                      const std::vector<std::size_t>& context, std::size_t positive,
                      const std::vector<std::size_t>& negatives);

/// Full-size analytic gradients of cbow_step_loss (zeros except touched rows).
void cbow_step_gradients(const Matrix& input_vecs, const Matrix& output_vecs,
                         const std::vector<std::size_t>& context, std::size_t positive,
                         const std::vector<std::size_t>& negatives, Matrix& grad_input,
                         Matrix& grad_output);

/// One SGD update, parameters -= lr * gradient; returns the step objective
/// before the update. This is the exact update the trainer applies.
double cbow_apply_step(Matrix& input_vecs, Matrix& output_vecs,
                       const std::vector<std::size_t>& context, std::size_t positive,
                       const std::vector<std::size_t>& negatives, double lr);

}  // namespace shiftscan
