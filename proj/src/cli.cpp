#include "shiftscan/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftscan/agreement.hpp"
#include "shiftscan/cbow.hpp"
#include "shiftscan/conllu.hpp"
#include "shiftscan/dataset.hpp"
#include "shiftscan/error.hpp"
#include "shiftscan/eval.hpp"
#include "shiftscan/metrics.hpp"
#include "shiftscan/textutil.hpp"
#include "shiftscan/workflow.hpp"

namespace shiftscan::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Every run writes exactly one manifest next to its primary output.
class Manifest {
 public:
  Manifest(std::string subcommand, std::uint64_t seed)
      : started_(iso_utc_now()), subcommand_(std::move(subcommand)), seed_(seed) {}

  void flag(const std::string& name, const nlohmann::json& value) { flags_[name] = value; }
  void input(const std::string& path) { inputs_.push_back(path); }
  void output(const std::string& path) { outputs_.push_back(path); }

  void write(const std::filesystem::path& primary_output) {
    nlohmann::json j;
    j["tool"] = "shiftscan";
    j["version"] = kVersion;
    j["subcommand"] = subcommand_;
    j["flags"] = flags_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["seed"] = seed_;
    j["started"] = started_;
    j["finished"] = iso_utc_now();
    const std::filesystem::path path = primary_output.string() + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path.string());
    out << j.dump(2) << '\n';
  }

 private:
  std::string started_;
  std::string subcommand_;
  std::uint64_t seed_;
  nlohmann::json flags_ = nlohmann::json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open word list: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

void write_word_list(const std::vector<std::string>& words, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write word list: " + path.string());
  for (const auto& w : words) out << w << '\n';
}

std::vector<Metric> parse_metric_list(const std::string& spec) {
  if (spec == "all") return all_metrics();
  std::vector<Metric> metrics;
  for (const auto& name : split(spec, ',')) {
    const auto m = metric_from_name(name);
    if (!m) throw CLI::ValidationError("--metrics", "unknown metric '" + name + "'");
    metrics.push_back(*m);
  }
  if (metrics.empty()) throw CLI::ValidationError("--metrics", "empty metric list");
  return metrics;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path.string());
  return out;
}

// ---------------------------------------------------------------- prep ---

struct PrepOpts {
  std::vector<std::string> inputs;
  std::string epoch_label;
  std::string out;
};

void run_prep(const PrepOpts& o) {
  Manifest manifest("prep", 0);
  TimeBinCorpus merged;
  merged.epoch_label = o.epoch_label;
  for (const auto& input : o.inputs) {
    manifest.input(input);
    TimeBinCorpus part = conllu_to_corpus(read_file(input), o.epoch_label);
    merged.token_count += part.token_count;
    for (auto& s : part.sentences) merged.sentences.push_back(std::move(s));
  }
  save_corpus(merged, o.out);
  manifest.flag("epoch-label", o.epoch_label);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "prep: " << merged.sentences.size() << " sentences, " << merged.token_count
            << " tokens -> " << o.out << "\n";
}

// --------------------------------------------------------------- train ---

struct TrainOpts {
  std::string corpus;
  std::string epoch_label;
  std::string mode = "static";
  std::string init;
  std::string out;
  TrainConfig config;
};

void run_train(const TrainOpts& o) {
  Manifest manifest("train", o.config.seed);
  manifest.input(o.corpus);
  const TimeBinCorpus corpus = load_corpus(o.corpus, o.epoch_label);

  TrainConfig config = o.config;
  TrainStats stats;
  EmbeddingModel model;
  if (o.mode == "static") {
    config.mode = TrainMode::Static;
    model = train_static(corpus, config, &stats);
  } else if (o.mode == "incremental") {
    config.mode = TrainMode::Incremental;
    if (o.init.empty()) throw CLI::ValidationError("--init", "required for incremental mode");
    manifest.input(o.init);
    EmbeddingModel prev = load_embeddings(o.init);
    const std::filesystem::path outputs_path = o.init + ".outputs";
    if (std::filesystem::exists(outputs_path)) {
      manifest.input(outputs_path.string());
      const EmbeddingModel prev_out = load_embeddings(outputs_path);
      bool aligned = prev_out.vocab.size() == prev.vocab.size() && prev_out.dim == prev.dim;
      for (std::size_t i = 0; aligned && i < prev.vocab.size(); ++i) {
        aligned = prev_out.vocab.token(i) == prev.vocab.token(i);
      }
      if (aligned) {
        prev.output_vectors = prev_out.vectors;
      } else {
        std::cerr << "train: ignoring " << outputs_path
                  << " (does not match the init model); output vectors start at zero\n";
      }
    }
    model = train_incremental(prev, corpus, config, &stats);
  } else {
    throw CLI::ValidationError("--mode", "must be 'static' or 'incremental'");
  }

  save_embeddings(model, o.out);
  manifest.output(o.out);
  // Output-side vectors ride along so a later incremental run can resume
  // full training state across processes.
  if (model.output_vectors) {
    EmbeddingModel outputs;
    outputs.vocab = model.vocab;
    outputs.vectors = *model.output_vectors;
    outputs.dim = model.dim;
    save_embeddings(outputs, o.out + ".outputs");
    manifest.output(o.out + ".outputs");
  }

  manifest.flag("mode", o.mode);
  manifest.flag("dim", o.config.dim);
  manifest.flag("window", o.config.window);
  manifest.flag("epochs", o.config.epochs);
  manifest.flag("min-count", o.config.min_count);
  manifest.flag("negatives", o.config.negatives);
  manifest.flag("lr", o.config.initial_lr);
  manifest.flag("workers", o.config.workers);
  manifest.flag("epoch-label", model.epoch_label);
  manifest.write(o.out);

  std::cout << "train: V=" << model.vocab.size() << " d=" << model.dim << " steps=" << stats.steps;
  if (!stats.epoch_loss.empty()) {
    std::cout << " first-epoch-loss=" << format_fixed6(stats.epoch_loss.front())
              << " last-epoch-loss=" << format_fixed6(stats.epoch_loss.back());
  }
  std::cout << " -> " << o.out << "\n";
  if (o.config.workers > 1) {
    std::cout << "note: workers>1 applies unsynchronized updates; results are not reproducible\n";
  }
}

// --------------------------------------------------------------- score ---

struct ScoreOpts {
  std::string m1, m2, words, out;
  std::string metrics = "all";
  MetricConfig cfg;
  std::uint64_t anchor_subsample = 0;
};

int run_score(const ScoreOpts& o) {
  Manifest manifest("score", o.cfg.seed);
  manifest.input(o.m1);
  manifest.input(o.m2);
  manifest.input(o.words);
  MetricConfig cfg = o.cfg;
  if (o.anchor_subsample > 0) cfg.anchor_subsample = o.anchor_subsample;

  const EmbeddingModel m1 = unit_normalize(load_embeddings(o.m1));
  const EmbeddingModel m2 = unit_normalize(load_embeddings(o.m2));
  const std::vector<std::string> words = read_word_list(o.words);
  const ScoreTable table = score_all(m1, m2, words, parse_metric_list(o.metrics), cfg);

  auto out = open_out(o.out);
  write_scores_tsv(out, table.scores);
  manifest.flag("metrics", o.metrics);
  manifest.flag("n", cfg.neighborhood);
  manifest.output(o.out);
  manifest.write(o.out);

  for (const auto& [word, reason] : table.failures) {
    std::cerr << "score: cannot score '" << word << "': " << reason << "\n";
  }
  std::cout << "score: " << table.scores.size() << " rows -> " << o.out << "\n";
  return table.failures.empty() ? 0 : 2;
}

// ---------------------------------------------------------------- rank ---

struct RankOpts {
  std::string m1, m2, out;
  std::string metric = "global_anchors";
  std::string pos;
  std::size_t k = 10;
  MetricConfig cfg;
};

void run_rank(const RankOpts& o) {
  Manifest manifest("rank", o.cfg.seed);
  manifest.input(o.m1);
  manifest.input(o.m2);
  const EmbeddingModel m1 = unit_normalize(load_embeddings(o.m1));
  const EmbeddingModel m2 = unit_normalize(load_embeddings(o.m2));
  const auto metric = metric_from_name(o.metric);
  if (!metric) throw CLI::ValidationError("--metric", "unknown metric '" + o.metric + "'");

  std::vector<std::string> words = common_vocab(m1, m2);
  if (!o.pos.empty()) {
    const std::string suffix = "_" + o.pos;
    std::erase_if(words, [&suffix](const std::string& w) {
      return w.size() <= suffix.size() ||
             w.compare(w.size() - suffix.size(), suffix.size(), suffix) != 0;
    });
  }
  ScoreTable table = score_all(m1, m2, words, {*metric}, o.cfg);
  std::sort(table.scores.begin(), table.scores.end(), [](const ShiftScore& a, const ShiftScore& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.word < b.word;
  });
  if (table.scores.size() > o.k) table.scores.resize(o.k);

  auto out = open_out(o.out);
  write_scores_tsv(out, table.scores);
  manifest.flag("metric", o.metric);
  manifest.flag("k", o.k);
  manifest.flag("pos", o.pos);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "rank: top " << table.scores.size() << " -> " << o.out << "\n";
}

// ---------------------------------------------------------- candidates ---

struct CandidatesOpts {
  std::string m1, m2, out;
  std::string pos = "ADJ";
  std::size_t k = 10;
  MetricConfig cfg;
};

void run_candidates(const CandidatesOpts& o) {
  Manifest manifest("candidates", o.cfg.seed);
  manifest.input(o.m1);
  manifest.input(o.m2);
  const EmbeddingModel m1 = unit_normalize(load_embeddings(o.m1));
  const EmbeddingModel m2 = unit_normalize(load_embeddings(o.m2));
  const CandidateResult result = generate_candidates(m1, m2, o.pos, o.k, o.cfg);
  for (const auto& w : result.warnings) std::cerr << "candidates: warning: " << w << "\n";
  write_word_list(result.words, o.out);
  manifest.flag("pos", o.pos);
  manifest.flag("k", o.k);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "candidates: " << result.words.size() << " words -> " << o.out << "\n";
}

// ------------------------------------------------------------- fillers ---

struct FillersOpts {
  std::string seeds, corpus, out;
  std::string pos = "ADJ";
  std::size_t per_seed = 1;
  std::uint64_t seed = 42;
};

void run_fillers(const FillersOpts& o) {
  Manifest manifest("fillers", o.seed);
  manifest.input(o.seeds);
  manifest.input(o.corpus);
  const std::vector<std::string> seeds = read_word_list(o.seeds);
  const Vocabulary freq = frequency_table(load_corpus(o.corpus));
  const FillerResult result = sample_fillers(seeds, freq, o.pos, o.per_seed, o.seed);
  for (const auto& w : result.warnings) std::cerr << "fillers: warning: " << w << "\n";
  write_word_list(result.words, o.out);
  manifest.flag("pos", o.pos);
  manifest.flag("per-seed", o.per_seed);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "fillers: " << result.words.size() << " words -> " << o.out << "\n";
}

// ------------------------------------------------------------ contexts ---

struct ContextsOpts {
  std::string c1, c2, word, out;
  std::string l1, l2;
  std::size_t per_bin = 10;
  std::uint64_t seed = 42;
};

void run_contexts(const ContextsOpts& o) {
  Manifest manifest("contexts", o.seed);
  manifest.input(o.c1);
  manifest.input(o.c2);
  const TimeBinCorpus c1 = load_corpus(o.c1, o.l1);
  const TimeBinCorpus c2 = load_corpus(o.c2, o.l2);
  const auto samples = sample_contexts(c1, c2, o.word, o.per_bin, o.seed);

  auto out = open_out(o.out);
  out << "bin_label\tsentence\n";
  for (const auto& bin : samples) {
    for (const auto& s : bin.sentences) out << bin.epoch_label << '\t' << s << '\n';
    if (bin.exhausted) {
      std::cerr << "contexts: only " << bin.sentences.size() << " sentence(s) contain '" << o.word
                << "' in bin " << bin.epoch_label << "\n";
    }
  }
  manifest.flag("word", o.word);
  manifest.flag("per-bin", o.per_bin);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "contexts: " << samples[0].sentences.size() << "+" << samples[1].sentences.size()
            << " sentences -> " << o.out << "\n";
}

// ------------------------------------------------------------ evaluate ---

struct EvaluateOpts {
  std::string gold, models_dir, out;
  std::string method = "combined";
  std::string regime = "static";
  std::size_t folds = 9;
  double l2 = 1.0;
  MetricConfig cfg;
};

void run_evaluate(const EvaluateOpts& o) {
  Manifest manifest("evaluate", o.cfg.seed);
  manifest.input(o.gold);
  manifest.input(o.models_dir);
  const auto method = eval_method_from_name(o.method);
  if (!method) throw CLI::ValidationError("--method", "unknown method '" + o.method + "'");
  if (o.regime != "static" && o.regime != "incremental") {
    throw CLI::ValidationError("--regime", "must be 'static' or 'incremental'");
  }

  const std::vector<GoldEntry> entries = load_gold(o.gold);
  DirModelProvider provider(o.models_dir, o.regime);

  EvaluateOptions options;
  options.method = *method;
  options.regime = o.regime;
  options.folds = o.folds;
  options.l2 = o.l2;
  options.metric_cfg = o.cfg;
  options.seed = o.cfg.seed;
  const EvalReport report = evaluate_gold(entries, provider.as_provider(), options);

  auto out = open_out(o.out);
  write_report_tsv(out, report);
  manifest.flag("method", o.method);
  manifest.flag("regime", o.regime);
  manifest.flag("folds", o.folds);
  manifest.flag("l2", o.l2);
  manifest.flag("n", o.cfg.neighborhood);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << format_report(report);
}

// ----------------------------------------------------------- agreement ---

struct AgreementOpts {
  std::string gold, out;
  std::string metric = "interval";
};

void run_agreement(const AgreementOpts& o) {
  Manifest manifest("agreement", 0);
  manifest.input(o.gold);
  const auto metric = agreement_metric_from_name(o.metric);
  if (!metric) throw CLI::ValidationError("--metric", "unknown agreement metric '" + o.metric + "'");
  const std::vector<GoldEntry> entries = load_gold(o.gold);
  const AgreementReport report = krippendorff_alpha(ratings_grid(entries), *metric);

  auto out = open_out(o.out);
  out << "alpha\tannotators\titems\tmetric\n";
  out << format_fixed6(report.alpha) << '\t' << report.annotator_count << '\t' << report.item_count
      << '\t' << agreement_metric_name(report.metric_kind) << '\n';
  manifest.flag("metric", o.metric);
  manifest.output(o.out);
  manifest.write(o.out);
  std::cout << "agreement: alpha=" << format_fixed6(report.alpha) << " ("
            << agreement_metric_name(report.metric_kind) << ", " << report.item_count
            << " items, " << report.annotator_count << " annotators)\n";
}

// ------------------------------------------------------------ validate ---

struct ValidateOpts {
  std::string gold, out;
};

int run_validate(const ValidateOpts& o) {
  Manifest manifest("validate", 0);
  manifest.input(o.gold);
  const std::vector<GoldEntry> entries = load_gold(o.gold);
  const DatasetSummary summary = validate_dataset(entries);

  auto out = open_out(o.out);
  out << "key\tvalue\n";
  out << "total\t" << summary.total << '\n';
  for (const auto& [cls, count] : summary.per_class) out << "class_" << cls << '\t' << count << '\n';
  for (const auto& [pair, count] : summary.per_pair) out << "pair_" << pair << '\t' << count << '\n';
  for (const auto& [pos, count] : summary.per_pos) out << "pos_" << pos << '\t' << count << '\n';
  out << "quantization_mismatches\t" << summary.quantization_mismatches.size() << '\n';
  manifest.output(o.out);
  manifest.write(o.out);

  std::cout << "validate: " << summary.total << " entries, " << summary.per_pair.size()
            << " pairs, " << summary.quantization_mismatches.size() << " mismatch(es)\n";
  for (const auto& m : summary.quantization_mismatches) {
    std::cerr << "validate: mismatch: " << m << "\n";
  }
  return summary.quantization_mismatches.empty() ? 0 : 2;
}

// ----------------------------------------------------------- plot-data ---

struct PlotDataOpts {
  std::string gold, corpora_dir, out_prefix;
};

void run_plot_data(const PlotDataOpts& o) {
  Manifest manifest("plot-data", 0);
  manifest.input(o.gold);
  const std::vector<GoldEntry> entries = load_gold(o.gold);

  // Histogram of mean annotator scores (7 possible values for 3 annotators).
  {
    std::map<int, std::size_t> hist;  // key = sum of scores 0..6
    for (const auto& e : entries) {
      if (e.scores) hist[(*e.scores)[0] + (*e.scores)[1] + (*e.scores)[2]] += 1;
    }
    const std::string path = o.out_prefix + "_score_hist.csv";
    auto out = open_out(path);
    out << "mean_score,count\n";
    for (int sum = 0; sum <= 6; ++sum) {
      out << format_fixed6(static_cast<double>(sum) / 3.0) << ',' << hist[sum] << '\n';
    }
    manifest.output(path);
  }

  // Class counts per model pair.
  {
    std::map<std::string, std::array<std::size_t, 3>> counts;
    for (const auto& e : entries) {
      auto& c = counts[e.source_label + "-" + e.target_label];
      if (e.quantized_class >= 0 && e.quantized_class <= 2) {
        c[static_cast<std::size_t>(e.quantized_class)] += 1;
      }
    }
    const std::string path = o.out_prefix + "_class_by_pair.csv";
    auto out = open_out(path);
    out << "pair,class0,class1,class2\n";
    for (const auto& [pair, c] : counts) out << pair << ',' << c[0] << ',' << c[1] << ',' << c[2] << '\n';
    manifest.output(path);
  }

  // Corpus sizes, when a corpora directory is given.
  if (!o.corpora_dir.empty()) {
    manifest.input(o.corpora_dir);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(o.corpora_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string path = o.out_prefix + "_corpus_sizes.csv";
    auto out = open_out(path);
    out << "epoch_label,token_count\n";
    for (const auto& f : files) {
      const TimeBinCorpus corpus = load_corpus(f);
      out << corpus.epoch_label << ',' << corpus.token_count << '\n';
    }
    manifest.output(path);
  }

  manifest.write(o.out_prefix);
  std::cout << "plot-data: wrote " << o.out_prefix << "_*.csv\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"shiftscan: diachronic semantic shift detection over word embedding models"};
  app.fallthrough(true);  // --seed may appear after the subcommand name
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "seed for every random choice")->capture_default_str();

  PrepOpts prep;
  auto* prep_cmd = app.add_subcommand("prep", "convert tagged CoNLL-U into a training corpus");
  prep_cmd->add_option("--input", prep.inputs, "CoNLL-U input file(s)")->required();
  prep_cmd->add_option("--epoch-label", prep.epoch_label, "time-bin label")->required();
  prep_cmd->add_option("--out", prep.out, "corpus output file")->required();

  TrainOpts train;
  auto* train_cmd = app.add_subcommand("train", "train CBOW embeddings on a corpus");
  train_cmd->add_option("--corpus", train.corpus, "corpus file (one sentence per line)")->required();
  train_cmd->add_option("--epoch-label", train.epoch_label, "time-bin label (default: file stem)");
  train_cmd->add_option("--mode", train.mode, "static | incremental")->capture_default_str();
  train_cmd->add_option("--init", train.init, "previous model (incremental mode)");
  train_cmd->add_option("--dim", train.config.dim, "vector dimensionality")->capture_default_str();
  train_cmd->add_option("--window", train.config.window, "context window")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "training epochs")->capture_default_str();
  train_cmd->add_option("--min-count", train.config.min_count, "frequency threshold")
      ->capture_default_str();
  train_cmd->add_option("--negatives", train.config.negatives, "negative samples per step")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.config.initial_lr, "initial learning rate")
      ->capture_default_str();
  train_cmd->add_option("--workers", train.config.workers,
                        "worker threads (>1 is nondeterministic)")
      ->capture_default_str();
  train_cmd->add_option("--out", train.out, "model output file")->required();

  ScoreOpts score;
  auto* score_cmd = app.add_subcommand("score", "shift scores for a word list");
  score_cmd->add_option("--m1", score.m1, "source model")->required();
  score_cmd->add_option("--m2", score.m2, "target model")->required();
  score_cmd->add_option("--words", score.words, "word list file")->required();
  score_cmd->add_option("--metrics", score.metrics, "all or comma list")->capture_default_str();
  score_cmd->add_option("--n", score.cfg.neighborhood, "neighbor list size")->capture_default_str();
  score_cmd->add_option("--anchor-subsample", score.anchor_subsample,
                        "anchor subsample size (0 = full intersection)");
  score_cmd->add_option("--out", score.out, "scores TSV")->required();

  RankOpts rank;
  auto* rank_cmd = app.add_subcommand("rank", "top-k most shifted shared words");
  rank_cmd->add_option("--m1", rank.m1)->required();
  rank_cmd->add_option("--m2", rank.m2)->required();
  rank_cmd->add_option("--metric", rank.metric, "ranking metric")->capture_default_str();
  rank_cmd->add_option("--pos", rank.pos, "restrict to a POS suffix");
  rank_cmd->add_option("--k", rank.k, "list size")->capture_default_str();
  rank_cmd->add_option("--n", rank.cfg.neighborhood, "neighbor list size")->capture_default_str();
  rank_cmd->add_option("--out", rank.out, "ranked TSV")->required();

  CandidatesOpts candidates;
  auto* cand_cmd = app.add_subcommand("candidates", "seed candidates by global-anchors shift");
  cand_cmd->add_option("--m1", candidates.m1)->required();
  cand_cmd->add_option("--m2", candidates.m2)->required();
  cand_cmd->add_option("--pos", candidates.pos, "POS filter")->capture_default_str();
  cand_cmd->add_option("--k", candidates.k, "candidate count")->capture_default_str();
  cand_cmd->add_option("--out", candidates.out, "word list output")->required();

  FillersOpts fillers;
  auto* fill_cmd = app.add_subcommand("fillers", "frequency-tier matched fillers for seeds");
  fill_cmd->add_option("--seeds", fillers.seeds, "seed word list")->required();
  fill_cmd->add_option("--corpus", fillers.corpus, "corpus for the frequency table")->required();
  fill_cmd->add_option("--pos", fillers.pos, "POS filter")->capture_default_str();
  fill_cmd->add_option("--per-seed", fillers.per_seed, "fillers per seed")->capture_default_str();
  fill_cmd->add_option("--out", fillers.out, "word list output")->required();

  ContextsOpts contexts;
  auto* ctx_cmd = app.add_subcommand("contexts", "sample sentences containing a word");
  ctx_cmd->add_option("--c1", contexts.c1, "corpus of the first bin")->required();
  ctx_cmd->add_option("--c2", contexts.c2, "corpus of the second bin")->required();
  ctx_cmd->add_option("--l1", contexts.l1, "label of the first bin (default: file stem)");
  ctx_cmd->add_option("--l2", contexts.l2, "label of the second bin (default: file stem)");
  ctx_cmd->add_option("--word", contexts.word, "word to sample")->required();
  ctx_cmd->add_option("--per-bin", contexts.per_bin, "sentences per bin")->capture_default_str();
  ctx_cmd->add_option("--out", contexts.out, "contexts TSV")->required();

  EvaluateOpts evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "cross-validated macro-F1 against a gold dataset");
  eval_cmd->add_option("--gold", evaluate.gold, "gold TSV")->required();
  eval_cmd->add_option("--models-dir", evaluate.models_dir, "directory with <label>[_regime].vec")
      ->required();
  eval_cmd->add_option("--method", evaluate.method, "procrustes|global_anchors|jaccard|kendall|combined")
      ->capture_default_str();
  eval_cmd->add_option("--regime", evaluate.regime, "static | incremental")->capture_default_str();
  eval_cmd->add_option("--folds", evaluate.folds, "cross-validation folds")->capture_default_str();
  eval_cmd->add_option("--l2", evaluate.l2, "L2 regularization strength")->capture_default_str();
  eval_cmd->add_option("--n", evaluate.cfg.neighborhood, "neighbor list size")->capture_default_str();
  eval_cmd->add_option("--out", evaluate.out, "report TSV")->required();

  AgreementOpts agreement;
  auto* agr_cmd = app.add_subcommand("agreement", "inter-annotator agreement of a gold dataset");
  agr_cmd->add_option("--gold", agreement.gold, "gold TSV")->required();
  agr_cmd->add_option("--metric", agreement.metric, "interval|nominal|ordinal")->capture_default_str();
  agr_cmd->add_option("--out", agreement.out, "agreement TSV")->required();

  ValidateOpts validate;
  auto* val_cmd = app.add_subcommand("validate", "check a gold dataset and print summary counts");
  val_cmd->add_option("--gold", validate.gold, "gold TSV")->required();
  val_cmd->add_option("--out", validate.out, "summary TSV")->required();

  PlotDataOpts plot;
  auto* plot_cmd = app.add_subcommand("plot-data", "emit plot-ready CSV tables");
  plot_cmd->add_option("--gold", plot.gold, "gold TSV")->required();
  plot_cmd->add_option("--corpora-dir", plot.corpora_dir, "directory of corpus .txt files");
  plot_cmd->add_option("--out-prefix", plot.out_prefix, "prefix for the CSV outputs")->required();

  std::vector<const char*> argv;
  argv.push_back("shiftscan");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    score.cfg.seed = seed;
    rank.cfg.seed = seed;
    candidates.cfg.seed = seed;
    evaluate.cfg.seed = seed;
    fillers.seed = seed;
    contexts.seed = seed;
    train.config.seed = seed;

    if (prep_cmd->parsed()) run_prep(prep);
    else if (train_cmd->parsed()) run_train(train);
    else if (score_cmd->parsed()) return run_score(score);
    else if (rank_cmd->parsed()) run_rank(rank);
    else if (cand_cmd->parsed()) run_candidates(candidates);
    else if (fill_cmd->parsed()) run_fillers(fillers);
    else if (ctx_cmd->parsed()) run_contexts(contexts);
    else if (eval_cmd->parsed()) run_evaluate(evaluate);
    else if (agr_cmd->parsed()) run_agreement(agreement);
    else if (val_cmd->parsed()) return run_validate(validate);
    else if (plot_cmd->parsed()) run_plot_data(plot);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace shiftscan::cli
