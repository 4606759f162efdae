#pragma once

#include <cstdint>

namespace shiftscan {

enum class TrainMode { Static, Incremental };

/// CBOW training hyperparameters. Defaults follow the large-corpus setup;
/// the CLI exposes every field as a flag.
struct TrainConfig {
  std::size_t dim = 300;
  std::size_t window = 5;
  std::size_t epochs = 10;
  std::uint64_t min_count = 10;
  std::size_t negatives = 5;
  double initial_lr = 0.05;
  std::uint64_t seed = 42;
  TrainMode mode = TrainMode::Static;
  int workers = 1;  // >1 enables the nondeterministic lock-free mode
};

}  // namespace shiftscan
