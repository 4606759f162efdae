// Benchmark of the parallel kernels against the serial reference
// implementations from tests/reference. Prints timings, speedup, and the
// largest deviation between the two paths.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "reference/reference.hpp"
#include "shiftscan/embedding.hpp"
#include "shiftscan/kernels.hpp"
#include "shiftscan/metrics.hpp"
#include "shiftscan/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

shiftscan::EmbeddingModel make_model(std::size_t v, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  shiftscan::EmbeddingModel m;
  m.dim = d;
  m.vectors = shiftscan::Matrix(v, d);
  m.epoch_label = "bench" + std::to_string(seed);
  for (std::size_t i = 0; i < v; ++i) {
    m.vocab.push_back("w" + std::to_string(i), 1);
    for (std::size_t j = 0; j < d; ++j) m.vectors.at(i, j) = shiftscan::rng_real(rng) - 0.5;
  }
  return m;
}

std::vector<std::vector<double>> to_nested(const shiftscan::Matrix& m) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i), m.row(i) + m.cols());
  return out;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_dev) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|dev| %.3g\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, max_dev);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t v = 20000;
  std::size_t d = 100;
  std::size_t query_words = 64;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const std::size_t value = static_cast<std::size_t>(std::atoll(argv[i + 1]));
    if (flag == "--v") v = value;
    else if (flag == "--d") d = value;
    else if (flag == "--words") query_words = value;
    else {
      std::fprintf(stderr, "usage: bench_kernels [--v N] [--d N] [--words N]\n");
      return 1;
    }
  }
  std::printf("V=%zu d=%zu words=%zu threads=%d\n", v, d, query_words,
              shiftscan::kernels::thread_count());

  const shiftscan::EmbeddingModel m1 = shiftscan::unit_normalize(make_model(v, d, 1));
  const shiftscan::EmbeddingModel m2 = shiftscan::unit_normalize(make_model(v, d, 2));
  const auto nested1 = to_nested(m1.vectors);
  const auto nested2 = to_nested(m2.vectors);

  // row_dots: one similarity scan per query word
  {
    std::vector<double> out(v);
    double dev = 0.0;
    const auto t0 = Clock::now();
    std::vector<std::vector<double>> serial_results;
    for (std::size_t q = 0; q < query_words; ++q) {
      serial_results.push_back(reference::row_dots(nested1, nested1[q]));
    }
    const double serial_ms = ms_since(t0);
    const auto t1 = Clock::now();
    for (std::size_t q = 0; q < query_words; ++q) {
      shiftscan::kernels::row_dots(m1.vectors, m1.vectors.row(q), out.data());
      for (std::size_t i = 0; i < v; ++i) {
        dev = std::max(dev, std::abs(out[i] - serial_results[q][i]));
      }
    }
    report("row_dots", serial_ms, ms_since(t1), dev);
  }

  // crossprod: the Procrustes cross-covariance
  {
    const auto t0 = Clock::now();
    const auto serial = reference::crossprod(nested1, nested2);
    const double serial_ms = ms_since(t0);
    const auto t1 = Clock::now();
    const shiftscan::Matrix fast = shiftscan::kernels::crossprod(m1.vectors, m2.vectors);
    const double parallel_ms = ms_since(t1);
    double dev = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) dev = std::max(dev, std::abs(fast.at(i, j) - serial[i][j]));
    }
    report("crossprod", serial_ms, parallel_ms, dev);
  }

  // score_all with every metric vs the per-word reference loop
  {
    std::vector<std::string> words;
    for (std::size_t q = 0; q < query_words; ++q) words.push_back(m1.vocab.token(q));
    reference::SimpleModel ref1;
    reference::SimpleModel ref2;
    for (std::size_t i = 0; i < v; ++i) {
      ref1.tokens.push_back(m1.vocab.token(i));
      ref1.rows.push_back(nested1[i]);
      ref2.tokens.push_back(m2.vocab.token(i));
      ref2.rows.push_back(nested2[i]);
    }

    shiftscan::MetricConfig cfg;
    const auto t1 = Clock::now();
    const shiftscan::ScoreTable table =
        shiftscan::score_all(m1, m2, words, shiftscan::all_metrics(), cfg);
    const double parallel_ms = ms_since(t1);

    const shiftscan::AlignmentTransform transform = shiftscan::procrustes_fit(m1, m2);
    const auto w = to_nested(transform.w);
    const auto t0 = Clock::now();
    double dev = 0.0;
    std::size_t cursor = 0;
    for (const auto& word : words) {
      const double ga = reference::global_anchors(ref1, ref2, word);
      const double pr = reference::procrustes_score(ref1, ref2, word, w);
      const double jc = reference::jaccard(ref1, ref2, word, cfg.neighborhood);
      const double kt = reference::kendall(ref1, ref2, word, cfg.neighborhood);
      for (const double serial_value : {pr, ga, jc, kt}) {
        dev = std::max(dev, std::abs(table.scores[cursor++].value - serial_value));
      }
    }
    const double serial_ms = ms_since(t0);
    report("score_all(4 metrics)", serial_ms, parallel_ms, dev);
  }
  return 0;
}
