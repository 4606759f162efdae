#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "shiftscan/cbow.hpp"
#include "shiftscan/error.hpp"
#include "shiftscan/kernels.hpp"
#include "shiftscan/rng.hpp"

using namespace shiftscan;

namespace {

TimeBinCorpus corpus_from(const std::vector<std::vector<std::string>>& sentences,
                          const std::string& label = "bin") {
  TimeBinCorpus c;
  c.epoch_label = label;
  c.sentences = sentences;
  for (const auto& s : sentences) c.token_count += s.size();
  return c;
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.window = 2;
  cfg.epochs = 3;
  cfg.min_count = 1;
  cfg.negatives = 3;
  cfg.seed = 5;
  return cfg;
}

// Two-topic corpus: x and y always share identical contexts, z lives in a
// disjoint topic.
TimeBinCorpus two_topic_corpus(std::size_t sentences_per_word, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> out;
  const std::vector<std::string> topic1 = {"a", "b", "c", "d", "e"};
  const std::vector<std::string> topic2 = {"p", "q", "r", "s", "t"};
  for (std::size_t i = 0; i < sentences_per_word; ++i) {
    for (const char* w : {"x", "y"}) {
      std::vector<std::string> s{w};
      for (int k = 0; k < 4; ++k) s.push_back(topic1[rng_index(rng, topic1.size())]);
      rng_shuffle(s, rng);
      out.push_back(std::move(s));
    }
    std::vector<std::string> s{"z"};
    for (int k = 0; k < 4; ++k) s.push_back(topic2[rng_index(rng, topic2.size())]);
    rng_shuffle(s, rng);
    out.push_back(std::move(s));
  }
  return corpus_from(out, "topics");
}

double model_cosine(const EmbeddingModel& m, const std::string& a, const std::string& b) {
  const auto pa = m.vocab.position(a);
  const auto pb = m.vocab.position(b);
  REQUIRE(pa);
  REQUIRE(pb);
  const double* va = m.vector_of(*pa);
  const double* vb = m.vector_of(*pb);
  const double num = kernels::dot(va, vb, m.dim);
  return num / std::sqrt(kernels::dot(va, va, m.dim) * kernels::dot(vb, vb, m.dim));
}

}  // namespace

TEST_CASE("build_vocab filters by min_count") {
  const auto corpus = corpus_from({{"a", "a", "b"}});
  const Vocabulary v2 = build_vocab(corpus, 2);
  REQUIRE(v2.size() == 1);
  CHECK(v2.token(0) == "a");

  const Vocabulary v1 = build_vocab(corpus, 1);
  const Vocabulary full = frequency_table(corpus);
  REQUIRE(v1.size() == full.size());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    CHECK(v1.token(i) == full.token(i));
    CHECK(v1.frequency(i) == full.frequency(i));
  }
}

TEST_CASE("build_vocab equals a recount filter on a Zipf-like corpus") {
  std::mt19937_64 rng(17);
  std::vector<std::vector<std::string>> sentences;
  for (int s = 0; s < 300; ++s) {
    std::vector<std::string> sent;
    for (int t = 0; t < 8; ++t) {
      // crude Zipf: token id biased toward the low end
      const auto u = rng_real(rng);
      const auto id = static_cast<std::size_t>(30.0 * u * u);
      sent.push_back("w" + std::to_string(id));
    }
    sentences.push_back(std::move(sent));
  }
  const auto corpus = corpus_from(sentences);
  const Vocabulary oracle = frequency_table(corpus);
  const Vocabulary filtered = build_vocab(corpus, 10);
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    CHECK(filtered.frequency(i) >= 10);
    CHECK(oracle.position(filtered.token(i)).has_value());
  }
  std::size_t expected = 0;
  for (const auto& e : oracle.entries()) expected += e.frequency >= 10 ? 1 : 0;
  CHECK(filtered.size() == expected);
}

TEST_CASE("CBOW step gradients match central finite differences at dim=8") {
  std::mt19937_64 rng(3);
  const std::size_t v = 6;
  const std::size_t dim = 8;
  Matrix input(v, dim);
  Matrix output(v, dim);
  for (auto& x : input.data()) x = testhelpers::gaussian(rng) * 0.3;
  for (auto& x : output.data()) x = testhelpers::gaussian(rng) * 0.3;

  const std::vector<std::size_t> context{0, 2, 2, 4};  // duplicate on purpose
  const std::size_t positive = 1;
  const std::vector<std::size_t> negatives{3, 5, 3};  // duplicate on purpose

  Matrix grad_in, grad_out;
  cbow_step_gradients(input, output, context, positive, negatives, grad_in, grad_out);

  const double eps = 1e-5;
  double max_rel = 0.0;
  const auto check_param = [&](Matrix& target, const Matrix& analytic, std::size_t i, std::size_t j) {
    const double saved = target.at(i, j);
    target.at(i, j) = saved + eps;
    const double up = cbow_step_loss(input, output, context, positive, negatives);
    target.at(i, j) = saved - eps;
    const double down = cbow_step_loss(input, output, context, positive, negatives);
    target.at(i, j) = saved;
    const double fd = (up - down) / (2.0 * eps);
    const double denom = std::max({std::abs(fd), std::abs(analytic.at(i, j)), 1e-8});
    max_rel = std::max(max_rel, std::abs(fd - analytic.at(i, j)) / denom);
  };
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      check_param(input, grad_in, i, j);
      check_param(output, grad_out, i, j);
    }
  }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("cbow_apply_step equals explicit gradient descent") {
  std::mt19937_64 rng(9);
  Matrix input(5, 6), output(5, 6);
  for (auto& x : input.data()) x = testhelpers::gaussian(rng) * 0.2;
  for (auto& x : output.data()) x = testhelpers::gaussian(rng) * 0.2;
  const std::vector<std::size_t> context{0, 3};
  const std::vector<std::size_t> negatives{2, 4};
  const double lr = 0.1;

  Matrix grad_in, grad_out;
  cbow_step_gradients(input, output, context, 1, negatives, grad_in, grad_out);
  Matrix expect_in = input;
  Matrix expect_out = output;
  for (std::size_t idx = 0; idx < expect_in.data().size(); ++idx) {
    expect_in.data()[idx] -= lr * grad_in.data()[idx];
    expect_out.data()[idx] -= lr * grad_out.data()[idx];
  }

  const double loss_before = cbow_step_loss(input, output, context, 1, negatives);
  const double loss_returned = cbow_apply_step(input, output, context, 1, negatives, lr);
  CHECK(loss_returned == doctest::Approx(loss_before).epsilon(1e-12));
  for (std::size_t idx = 0; idx < input.data().size(); ++idx) {
    CHECK(input.data()[idx] == doctest::Approx(expect_in.data()[idx]).epsilon(1e-12).scale(1.0));
    CHECK(output.data()[idx] == doctest::Approx(expect_out.data()[idx]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("training loss decreases over the first 3 epochs on a fixed toy corpus") {
  const auto corpus = two_topic_corpus(60, 21);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 3;
  TrainStats stats;
  (void)train_static(corpus, cfg, &stats);
  REQUIRE(stats.epoch_loss.size() == 3);
  CHECK(stats.epoch_loss[1] < stats.epoch_loss[0]);
  CHECK(stats.epoch_loss[2] < stats.epoch_loss[1]);
}

TEST_CASE("train_static is bit-reproducible in single-worker mode") {
  const auto corpus = two_topic_corpus(20, 4);
  const TrainConfig cfg = tiny_config();
  const EmbeddingModel a = train_static(corpus, cfg);
  const EmbeddingModel b = train_static(corpus, cfg);
  CHECK(a.vectors == b.vectors);
  CHECK(*a.output_vectors == *b.output_vectors);
}

TEST_CASE("trained vectors are finite") {
  const auto corpus = two_topic_corpus(30, 8);
  TrainConfig cfg = tiny_config();
  cfg.epochs = 5;
  const EmbeddingModel m = train_static(corpus, cfg);
  for (const double x : m.vectors.data()) CHECK(std::isfinite(x));
  for (const double x : m.output_vectors->data()) CHECK(std::isfinite(x));
}

TEST_CASE("shared contexts pull vectors together") {
  const auto corpus = two_topic_corpus(150, 13);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 5;
  cfg.epochs = 15;
  cfg.min_count = 1;
  cfg.negatives = 5;
  cfg.seed = 2;
  const EmbeddingModel m = train_static(corpus, cfg);
  CHECK(model_cosine(m, "x", "y") > model_cosine(m, "x", "z"));
}

TEST_CASE("single admissible token trains without error") {
  const auto corpus = corpus_from({{"only", "only", "only"}});
  TrainConfig cfg = tiny_config();
  const EmbeddingModel m = train_static(corpus, cfg);
  CHECK(m.vocab.size() == 1);
  for (const double x : m.vectors.data()) CHECK(std::isfinite(x));
}

#ifdef _OPENMP
TEST_CASE("multi-worker training runs and produces finite vectors") {
  const auto corpus = two_topic_corpus(40, 3);
  TrainConfig cfg = tiny_config();
  cfg.workers = 2;
  const EmbeddingModel m = train_static(corpus, cfg);
  CHECK(m.vocab.size() > 0);
  for (const double x : m.vectors.data()) CHECK(std::isfinite(x));
}
#endif

TEST_CASE("empty filtered vocabulary is an error") {
  const auto corpus = corpus_from({{"a", "b"}});
  TrainConfig cfg = tiny_config();
  cfg.min_count = 10;
  CHECK_THROWS_AS((void)train_static(corpus, cfg), DataError);
}

TEST_CASE("train_incremental with epochs=0 keeps shared vectors exactly") {
  const auto first = two_topic_corpus(15, 6);
  TrainConfig cfg = tiny_config();
  const EmbeddingModel prev = train_static(first, cfg);

  const auto second = corpus_from({{"x", "a", "newtok"}, {"newtok", "b", "y"}}, "bin2");
  TrainConfig inc = cfg;
  inc.mode = TrainMode::Incremental;
  inc.epochs = 0;
  const EmbeddingModel next = train_incremental(prev, second, inc);

  CHECK(next.epoch_label == "bin2");
  for (const auto& e : prev.vocab.entries()) {
    const auto p_prev = prev.vocab.position(e.token);
    const auto p_next = next.vocab.position(e.token);
    REQUIRE(p_next);
    for (std::size_t j = 0; j < cfg.dim; ++j) {
      CHECK(next.vectors.at(*p_next, j) == prev.vectors.at(*p_prev, j));
      CHECK(next.output_vectors->at(*p_next, j) == prev.output_vectors->at(*p_prev, j));
    }
  }
  CHECK(next.vocab.contains("newtok"));
  CHECK(next.vocab.size() == prev.vocab.size() + 1);
}

TEST_CASE("train_incremental rejects dimension mismatch") {
  const auto first = two_topic_corpus(10, 6);
  const EmbeddingModel prev = train_static(first, tiny_config());
  TrainConfig inc = tiny_config();
  inc.mode = TrainMode::Incremental;
  inc.dim = 16;
  CHECK_THROWS_AS((void)train_incremental(prev, first, inc), DataError);
}

TEST_CASE("incremental training moves a context-swapped word more than stable words") {
  // Bin 1: target and controls all live in topic A. Bin 2: the target swaps
  // to topic B, controls stay.
  std::mt19937_64 rng(42);
  const std::vector<std::string> topic_a = {"a0", "a1", "a2", "a3", "a4", "a5"};
  const std::vector<std::string> topic_b = {"b0", "b1", "b2", "b3", "b4", "b5"};
  const std::vector<std::string> tracked = {"target", "c0", "c1", "c2", "c3", "c4"};

  const auto make_bin = [&](bool swap_target, const std::string& label) {
    std::vector<std::vector<std::string>> sentences;
    for (int rep = 0; rep < 250; ++rep) {
      for (const auto& w : tracked) {
        const bool use_b = swap_target && w == "target";
        const auto& topic = use_b ? topic_b : topic_a;
        std::vector<std::string> s{w};
        for (int k = 0; k < 5; ++k) s.push_back(topic[rng_index(rng, topic.size())]);
        sentences.push_back(std::move(s));
      }
      // keep topic B words in bin 1's vocabulary too
      std::vector<std::string> filler;
      for (int k = 0; k < 6; ++k) filler.push_back(topic_b[rng_index(rng, topic_b.size())]);
      sentences.push_back(std::move(filler));
    }
    return corpus_from(sentences, label);
  };

  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 5;
  cfg.epochs = 8;
  cfg.min_count = 1;
  cfg.seed = 7;
  const EmbeddingModel m1 = train_static(make_bin(false, "bin1"), cfg);
  TrainConfig inc = cfg;
  inc.mode = TrainMode::Incremental;
  const EmbeddingModel m2 = train_incremental(m1, make_bin(true, "bin2"), inc);

  const auto self_distance = [&](const std::string& w) {
    const double* before = m1.vector_of(*m1.vocab.position(w));
    const double* after = m2.vector_of(*m2.vocab.position(w));
    const double num = kernels::dot(before, after, cfg.dim);
    const double den = std::sqrt(kernels::dot(before, before, cfg.dim) *
                                 kernels::dot(after, after, cfg.dim));
    return 1.0 - num / den;
  };
  std::vector<double> control_moves;
  for (const auto& w : {"c0", "c1", "c2", "c3", "c4"}) control_moves.push_back(self_distance(w));
  std::sort(control_moves.begin(), control_moves.end());
  const double median_control = control_moves[control_moves.size() / 2];
  CHECK(self_distance("target") > median_control);
}
