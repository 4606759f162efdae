#include "shiftscan/conllu.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_map>

#include "shiftscan/error.hpp"
#include "shiftscan/textutil.hpp"

namespace shiftscan {

bool is_functional_pos(const std::string& upos) {
  static const std::array<const char*, 11> kFunctional = {
      "ADP", "AUX", "CCONJ", "SCONJ", "DET", "PART", "PRON", "PUNCT", "SYM", "X", "NUM"};
  return std::find(kFunctional.begin(), kFunctional.end(), upos) != kFunctional.end();
}

namespace {

struct RawToken {
  std::string lemma;
  std::string upos;
  std::string feat_case;    // empty = missing
  std::string feat_number;  // empty = missing
};

void parse_feats(const std::string& feats, RawToken& tok) {
  if (feats == "_" || feats.empty()) return;
  for (const auto& pair : split(feats, '|')) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = pair.substr(0, eq);
    if (key == "Case") tok.feat_case = pair.substr(eq + 1);
    else if (key == "Number") tok.feat_number = pair.substr(eq + 1);
  }
}

bool propn_pair_agrees(const RawToken& a, const RawToken& b) {
  if (a.feat_case.empty() || b.feat_case.empty()) return false;
  if (a.feat_number.empty() || b.feat_number.empty()) return false;
  return a.feat_case == b.feat_case && a.feat_number == b.feat_number;
}

// Merge maximal runs of adjacent PROPN tokens whose consecutive pairs agree
// in Case and Number, then drop functional POS and emit lowercase lemma_POS.
void finish_sentence(std::vector<RawToken>& raw, TimeBinCorpus& corpus) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::string lemma = raw[i].lemma;
    const std::string upos = raw[i].upos;
    std::size_t j = i + 1;
    while (upos == "PROPN" && j < raw.size() && raw[j].upos == "PROPN" &&
           propn_pair_agrees(raw[j - 1], raw[j])) {
      lemma += "::";
      lemma += raw[j].lemma;
      ++j;
    }
    if (!is_functional_pos(upos)) {
      tokens.push_back(utf8_lower(lemma) + "_" + upos);
    }
    i = j;
  }
  corpus.token_count += tokens.size();
  corpus.sentences.push_back(std::move(tokens));
  raw.clear();
}

bool is_plain_id(const std::string& id) {
  if (id.empty()) return false;
  for (const char c : id) {
    if (c < '0' || c > '9') return false;  // ranges (1-2) and empty nodes (1.1) are skipped
  }
  return true;
}

}  // namespace

TimeBinCorpus conllu_to_corpus(std::string_view conllu_text, std::string epoch_label) {
  TimeBinCorpus corpus;
  corpus.epoch_label = std::move(epoch_label);

  std::vector<RawToken> raw;
  bool in_sentence = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= conllu_text.size()) {
    std::size_t end = conllu_text.find('\n', start);
    if (end == std::string_view::npos) end = conllu_text.size();
    std::string_view line = conllu_text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;

    if (line.empty()) {
      if (in_sentence) {
        finish_sentence(raw, corpus);
        in_sentence = false;
      }
    } else if (line[0] != '#') {
      const auto cols = split(line, '\t');
      if (cols.size() != 10) {
        throw DataError("CoNLL-U line " + std::to_string(line_no) + ": expected 10 tab-separated columns, got " +
                        std::to_string(cols.size()));
      }
      in_sentence = true;
      if (is_plain_id(cols[0])) {
        if (cols[2].empty() || cols[3].empty()) {
          throw DataError("CoNLL-U line " + std::to_string(line_no) + ": empty LEMMA or UPOS column");
        }
        RawToken tok;
        tok.lemma = cols[2];
        tok.upos = cols[3];
        parse_feats(cols[5], tok);
        raw.push_back(std::move(tok));
      }
    }

    if (end == conllu_text.size()) break;
    start = end + 1;
  }
  if (in_sentence) finish_sentence(raw, corpus);
  return corpus;
}

Vocabulary frequency_table(const TimeBinCorpus& corpus) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) ++counts[token];
  }
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) entries.push_back({token, count});
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.token < b.token;
  });
  return Vocabulary::from_entries(std::move(entries));
}

void save_corpus(const TimeBinCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path.string());
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

TimeBinCorpus load_corpus(const std::filesystem::path& path, const std::string& epoch_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path.string());
  TimeBinCorpus corpus;
  corpus.epoch_label = epoch_label.empty() ? path.stem().string() : epoch_label;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = split_ws(line);
    corpus.token_count += tokens.size();
    corpus.sentences.push_back(std::move(tokens));
  }
  return corpus;
}

}  // namespace shiftscan
