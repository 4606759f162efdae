#include "shiftscan/cbow.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shiftscan/error.hpp"
#include "shiftscan/kernels.hpp"
#include "shiftscan/rng.hpp"

namespace shiftscan {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigmoid(x), stable for both signs
double nl_sigmoid(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

struct NegativeTable {
  std::vector<double> cumulative;  // cumulative counts^0.75 in vocab order
  double total = 0.0;

  void build(const Vocabulary& vocab) {
    cumulative.resize(vocab.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      acc += std::pow(static_cast<double>(vocab.frequency(i)), 0.75);
      cumulative[i] = acc;
    }
    total = acc;
  }

  std::size_t draw(std::mt19937_64& rng) const {
    const double u = rng_real(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(idx, cumulative.size() - 1);
  }
};

// Sentences mapped to vocabulary positions, out-of-vocabulary tokens removed.
std::vector<std::vector<std::uint32_t>> index_sentences(const TimeBinCorpus& corpus,
                                                        const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences) {
    std::vector<std::uint32_t> ids;
    ids.reserve(sentence.size());
    for (const auto& token : sentence) {
      if (const auto pos = vocab.position(token)) ids.push_back(static_cast<std::uint32_t>(*pos));
    }
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

void seed_input_row(double* row, std::size_t dim, std::mt19937_64& rng) {
  for (std::size_t j = 0; j < dim; ++j) row[j] = (rng_real(rng) - 0.5) / static_cast<double>(dim);
}

struct TrainerState {
  Vocabulary vocab;
  Matrix input;   // V x d
  Matrix output;  // V x d
  NegativeTable table;
  std::vector<std::vector<std::uint32_t>> sentences;
};

// The fused inner update; mirrors cbow_apply_step but works on raw rows and
// reuses scratch buffers. All gradients are evaluated at the pre-update
// point (a negative may be drawn twice), then applied. Returns the step
// objective before the update.
double train_step(Matrix& input, Matrix& output, const std::uint32_t* context, std::size_t n_ctx,
                  std::size_t positive, const std::size_t* negatives, std::size_t n_neg, double lr,
                  std::vector<double>& h, std::vector<double>& h_grad, std::vector<double>& errs) {
  const std::size_t dim = input.cols();
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t c = 0; c < n_ctx; ++c) {
    const double* row = input.row(context[c]);
    for (std::size_t j = 0; j < dim; ++j) h[j] += row[j];
  }
  const double inv_ctx = 1.0 / static_cast<double>(n_ctx);
  for (std::size_t j = 0; j < dim; ++j) h[j] *= inv_ctx;

  std::fill(h_grad.begin(), h_grad.end(), 0.0);
  errs.resize(n_neg + 1);
  double loss = 0.0;
  for (std::size_t o = 0; o <= n_neg; ++o) {
    const std::size_t target = (o == 0) ? positive : negatives[o - 1];
    const double label = (o == 0) ? 1.0 : 0.0;
    const double* out_row = output.row(target);
    const double score = kernels::dot(h.data(), out_row, dim);
    loss += (o == 0) ? nl_sigmoid(score) : nl_sigmoid(-score);
    errs[o] = sigmoid(score) - label;  // dL/dscore
    for (std::size_t j = 0; j < dim; ++j) h_grad[j] += errs[o] * out_row[j];
  }
  for (std::size_t o = 0; o <= n_neg; ++o) {
    const std::size_t target = (o == 0) ? positive : negatives[o - 1];
    double* out_row = output.row(target);
    for (std::size_t j = 0; j < dim; ++j) out_row[j] -= lr * errs[o] * h[j];
  }
  const double scale = lr * inv_ctx;
  for (std::size_t c = 0; c < n_ctx; ++c) {
    double* row = input.row(context[c]);
    for (std::size_t j = 0; j < dim; ++j) row[j] -= scale * h_grad[j];
  }
  return loss;
}

EmbeddingModel run_training(TrainerState state, const TimeBinCorpus& corpus,
                            const TrainConfig& config, TrainStats* stats) {
  const std::size_t dim = config.dim;
  std::uint64_t positions_per_epoch = 0;
  for (const auto& s : state.sentences) positions_per_epoch += s.size();
  const std::uint64_t total_positions = positions_per_epoch * config.epochs;
  const double lr_final = 1e-4 * config.initial_lr;

  if (stats) {
    stats->epoch_loss.clear();
    stats->steps = 0;
  }

  const auto lr_at = [&](std::uint64_t step) {
    if (total_positions == 0) return config.initial_lr;
    const double frac = static_cast<double>(step) / static_cast<double>(total_positions);
    return std::max(lr_final, config.initial_lr - (config.initial_lr - lr_final) * frac);
  };

  // SHIFTSCAN_THREADS caps the worker count like every other parallel path
  const int workers = std::max(1, std::min(config.workers, kernels::thread_count()));
  std::vector<std::size_t> negatives(config.negatives);

  if (workers == 1) {
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<double> h(dim);
    std::vector<double> h_grad(dim);
    std::vector<double> errs;
    std::vector<std::uint32_t> context;
    std::uint64_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      double loss_sum = 0.0;
      std::uint64_t loss_count = 0;
      for (const auto& sentence : state.sentences) {
        const std::size_t len = sentence.size();
        for (std::size_t t = 0; t < len; ++t, ++step) {
          context.clear();
          const std::size_t lo = t > config.window ? t - config.window : 0;
          const std::size_t hi = std::min(len, t + config.window + 1);
          for (std::size_t p = lo; p < hi; ++p) {
            if (p != t) context.push_back(sentence[p]);
          }
          if (context.empty()) continue;
          const std::size_t center = sentence[t];
          std::size_t n_neg = 0;
          for (std::size_t k = 0; k < config.negatives; ++k) {
            const std::size_t neg = state.table.draw(rng);
            if (neg != center) negatives[n_neg++] = neg;
          }
          loss_sum += train_step(state.input, state.output, context.data(), context.size(), center,
                                 negatives.data(), n_neg, lr_at(step), h, h_grad, errs);
          ++loss_count;
        }
      }
      if (stats) {
        stats->epoch_loss.push_back(loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0);
        stats->steps += loss_count;
      }
    }
  } else {
#ifdef _OPENMP
    // Lock-free parallel updates on the shared matrices; results vary with
    // scheduling and are only for full-scale runs, never for tests.
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      const std::uint64_t epoch_base = epoch * positions_per_epoch;
#pragma omp parallel num_threads(workers)
      {
        const int tid = omp_get_thread_num();
        std::mt19937_64 rng(config.seed + 0x51ed2701ULL * static_cast<std::uint64_t>(tid + 1) +
                            epoch);
        std::vector<double> h(dim);
        std::vector<double> h_grad(dim);
        std::vector<double> errs;
        std::vector<std::uint32_t> context;
        std::vector<std::size_t> negs(config.negatives);
        std::uint64_t local_step = epoch_base;
#pragma omp for schedule(static)
        for (long long si = 0; si < static_cast<long long>(state.sentences.size()); ++si) {
          const auto& sentence = state.sentences[static_cast<std::size_t>(si)];
          const std::size_t len = sentence.size();
          for (std::size_t t = 0; t < len; ++t, ++local_step) {
            context.clear();
            const std::size_t lo = t > config.window ? t - config.window : 0;
            const std::size_t hi = std::min(len, t + config.window + 1);
            for (std::size_t p = lo; p < hi; ++p) {
              if (p != t) context.push_back(sentence[p]);
            }
            if (context.empty()) continue;
            const std::size_t center = sentence[t];
            std::size_t n_neg = 0;
            for (std::size_t k = 0; k < config.negatives; ++k) {
              const std::size_t neg = state.table.draw(rng);
              if (neg != center) negs[n_neg++] = neg;
            }
            train_step(state.input, state.output, context.data(), context.size(), center,
                       negs.data(), n_neg, lr_at(local_step), h, h_grad, errs);
          }
        }
      }
    }
#else
    throw DataError("multi-worker training requires an OpenMP build");
#endif
  }

  EmbeddingModel model;
  model.vocab = std::move(state.vocab);
  model.vectors = std::move(state.input);
  model.dim = dim;
  model.normalized = false;
  model.epoch_label = corpus.epoch_label;
  model.train_meta = config;
  model.output_vectors = std::move(state.output);
  return model;
}

}  // namespace

Vocabulary build_vocab(const TimeBinCorpus& corpus, std::uint64_t min_count) {
  const Vocabulary full = frequency_table(corpus);
  std::vector<Vocabulary::Entry> kept;
  for (const auto& e : full.entries()) {
    if (e.frequency >= min_count) kept.push_back(e);
  }
  return Vocabulary::from_entries(std::move(kept));
}

EmbeddingModel train_static(const TimeBinCorpus& corpus, const TrainConfig& config,
                            TrainStats* stats) {
  if (config.mode != TrainMode::Static) throw DataError("train_static requires mode=static");
  if (config.dim == 0) throw DataError("dimensionality must be positive");

  TrainerState state;
  state.vocab = build_vocab(corpus, config.min_count);
  if (state.vocab.size() == 0) {
    throw DataError("no token reaches min_count=" + std::to_string(config.min_count));
  }
  state.input = Matrix(state.vocab.size(), config.dim);
  state.output = Matrix(state.vocab.size(), config.dim);
  std::mt19937_64 init_rng(config.seed);
  for (std::size_t i = 0; i < state.vocab.size(); ++i) {
    seed_input_row(state.input.row(i), config.dim, init_rng);
  }
  state.table.build(state.vocab);
  state.sentences = index_sentences(corpus, state.vocab);
  return run_training(std::move(state), corpus, config, stats);
}

EmbeddingModel train_incremental(const EmbeddingModel& prev, const TimeBinCorpus& corpus,
                                 const TrainConfig& config, TrainStats* stats) {
  if (config.mode != TrainMode::Incremental) {
    throw DataError("train_incremental requires mode=incremental");
  }
  if (prev.dim != config.dim) {
    throw DataError("dimensionality mismatch: previous model has d=" + std::to_string(prev.dim) +
                    ", config asks d=" + std::to_string(config.dim));
  }
  if (prev.normalized) throw DataError("cannot continue training from a normalized model");

  const Vocabulary fresh = build_vocab(corpus, config.min_count);
  const Vocabulary full = frequency_table(corpus);

  // Union vocabulary: prev's tokens first (keeping their order), then new
  // tokens in fresh order. Frequencies reflect the new corpus only.
  TrainerState state;
  for (const auto& e : prev.vocab.entries()) {
    const auto pos = full.position(e.token);
    state.vocab.push_back(e.token, pos ? full.frequency(*pos) : 0);
  }
  for (const auto& e : fresh.entries()) {
    if (!prev.vocab.contains(e.token)) state.vocab.push_back(e.token, e.frequency);
  }

  state.input = Matrix(state.vocab.size(), config.dim);
  state.output = Matrix(state.vocab.size(), config.dim);
  const std::size_t n_prev = prev.vocab.size();
  for (std::size_t i = 0; i < n_prev; ++i) {
    std::copy(prev.vectors.row(i), prev.vectors.row(i) + config.dim, state.input.row(i));
    if (prev.output_vectors) {
      std::copy(prev.output_vectors->row(i), prev.output_vectors->row(i) + config.dim,
                state.output.row(i));
    }
  }
  std::mt19937_64 init_rng(config.seed);
  for (std::size_t i = n_prev; i < state.vocab.size(); ++i) {
    seed_input_row(state.input.row(i), config.dim, init_rng);
  }

  state.table.build(state.vocab);
  state.sentences = index_sentences(corpus, state.vocab);
  return run_training(std::move(state), corpus, config, stats);
}

double cbow_step_loss(const Matrix& input_vecs, const Matrix& output_vecs,
                      const std::vector<std::size_t>& context, std::size_t positive,
                      const std::vector<std::size_t>& negatives) {
  const std::size_t dim = input_vecs.cols();
  std::vector<double> h(dim, 0.0);
  for (const std::size_t c : context) {
    const double* row = input_vecs.row(c);
    for (std::size_t j = 0; j < dim; ++j) h[j] += row[j];
  }
  for (std::size_t j = 0; j < dim; ++j) h[j] /= static_cast<double>(context.size());

  double loss = nl_sigmoid(kernels::dot(h.data(), output_vecs.row(positive), dim));
  for (const std::size_t neg : negatives) {
    loss += nl_sigmoid(-kernels::dot(h.data(), output_vecs.row(neg), dim));
  }
  return loss;
}

void cbow_step_gradients(const Matrix& input_vecs, const Matrix& output_vecs,
                         const std::vector<std::size_t>& context, std::size_t positive,
                         const std::vector<std::size_t>& negatives, Matrix& grad_input,
                         Matrix& grad_output) {
  const std::size_t dim = input_vecs.cols();
  grad_input = Matrix(input_vecs.rows(), dim);
  grad_output = Matrix(output_vecs.rows(), dim);

  std::vector<double> h(dim, 0.0);
  for (const std::size_t c : context) {
    const double* row = input_vecs.row(c);
    for (std::size_t j = 0; j < dim; ++j) h[j] += row[j];
  }
  const double inv_ctx = 1.0 / static_cast<double>(context.size());
  for (std::size_t j = 0; j < dim; ++j) h[j] *= inv_ctx;

  std::vector<double> h_grad(dim, 0.0);
  const std::size_t n_out = negatives.size() + 1;
  for (std::size_t o = 0; o < n_out; ++o) {
    const std::size_t target = (o == 0) ? positive : negatives[o - 1];
    const double label = (o == 0) ? 1.0 : 0.0;
    const double err = sigmoid(kernels::dot(h.data(), output_vecs.row(target), dim)) - label;
    for (std::size_t j = 0; j < dim; ++j) {
      h_grad[j] += err * output_vecs.at(target, j);
      grad_output.at(target, j) += err * h[j];
    }
  }
  for (const std::size_t c : context) {
    for (std::size_t j = 0; j < dim; ++j) grad_input.at(c, j) += inv_ctx * h_grad[j];
  }
}

double cbow_apply_step(Matrix& input_vecs, Matrix& output_vecs,
                       const std::vector<std::size_t>& context, std::size_t positive,
                       const std::vector<std::size_t>& negatives, double lr) {
  std::vector<double> h(input_vecs.cols());
  std::vector<double> h_grad(input_vecs.cols());
  std::vector<double> errs;
  std::vector<std::uint32_t> ctx(context.begin(), context.end());
  return train_step(input_vecs, output_vecs, ctx.data(), ctx.size(), positive, negatives.data(),
                    negatives.size(), lr, h, h_grad, errs);
}

}  // namespace shiftscan
