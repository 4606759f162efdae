#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "shiftscan/embedding.hpp"

namespace shiftscan {

/// One time bin's training text: sentences of lemma_POS tokens.
struct TimeBinCorpus {
  std::string epoch_label;
  std::vector<std::vector<std::string>> sentences;
  std::uint64_t token_count = 0;
};

/// Convert tagged CoNLL-U text into a token corpus:
///   - adjacent PROPN runs agreeing in Case and Number merge with "::"
///   - lemmas are lowercased and suffixed with "_UPOS"
///   - functional-POS tokens (ADP, AUX, CCONJ, SCONJ, DET, PART, PRON,
///     PUNCT, SYM, X, NUM) are dropped
/// Throws DataError with a line number on malformed input.
TimeBinCorpus conllu_to_corpus(std::string_view conllu_text, std::string epoch_label);

/// Occurrence counts ordered by descending frequency, ties by token string.
Vocabulary frequency_table(const TimeBinCorpus& corpus);

/// Corpus file format: one sentence per line, space-separated tokens, UTF-8.
void save_corpus(const TimeBinCorpus& corpus, const std::filesystem::path& path);
TimeBinCorpus load_corpus(const std::filesystem::path& path, const std::string& epoch_label = "");

bool is_functional_pos(const std::string& upos);

}  // namespace shiftscan
