#include "shiftscan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "shiftscan/error.hpp"
#include "shiftscan/rng.hpp"
#include "shiftscan/textutil.hpp"

namespace shiftscan {

FoldAssignment stratified_kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("fold count must be at least 2");
  if (labels.empty()) throw DataError("cannot assign folds to an empty label list");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  FoldAssignment out;
  out.fold_of.assign(labels.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t dealt = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < k) {
      out.warnings.push_back("class " + std::to_string(label) + " has only " +
                             std::to_string(members.size()) + " members for " + std::to_string(k) +
                             " folds; some folds will lack it");
    }
    rng_shuffle(members, rng);
    // start offset rotates with what was dealt so far, to balance totals
    const std::size_t offset = dealt % k;
    for (std::size_t j = 0; j < members.size(); ++j) {
      out.fold_of[members[j]] = (offset + j) % k;
    }
    dealt += members.size();
  }
  return out;
}

namespace {

struct PooledStats {
  std::vector<ClassStats> per_class;
  std::vector<int> confusion_labels;
  std::vector<std::vector<std::size_t>> confusion;
  double macro = 0.0;
};

PooledStats pooled_stats(const std::vector<int>& gold, const std::vector<int>& pred) {
  std::set<int> gold_classes(gold.begin(), gold.end());
  std::set<int> all_classes = gold_classes;
  all_classes.insert(pred.begin(), pred.end());

  PooledStats out;
  out.confusion_labels.assign(all_classes.begin(), all_classes.end());
  const std::size_t m = out.confusion_labels.size();
  out.confusion.assign(m, std::vector<std::size_t>(m, 0));
  const auto idx_of = [&](int label) {
    return static_cast<std::size_t>(
        std::lower_bound(out.confusion_labels.begin(), out.confusion_labels.end(), label) -
        out.confusion_labels.begin());
  };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    out.confusion[idx_of(gold[i])][idx_of(pred[i])] += 1;
  }

  double sum_f1 = 0.0;
  for (const int label : gold_classes) {
    const std::size_t li = idx_of(label);
    std::size_t tp = out.confusion[li][li];
    std::size_t gold_count = 0;
    std::size_t pred_count = 0;
    for (std::size_t j = 0; j < m; ++j) {
      gold_count += out.confusion[li][j];
      pred_count += out.confusion[j][li];
    }
    ClassStats cs;
    cs.label = label;
    cs.support = gold_count;
    cs.precision = pred_count > 0 ? static_cast<double>(tp) / static_cast<double>(pred_count) : 0.0;
    cs.recall = gold_count > 0 ? static_cast<double>(tp) / static_cast<double>(gold_count) : 0.0;
    cs.f1 = (cs.precision + cs.recall) > 0.0
                ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                : 0.0;
    sum_f1 += cs.f1;
    out.per_class.push_back(cs);
  }
  out.macro = sum_f1 / static_cast<double>(gold_classes.size());
  return out;
}

}  // namespace

double macro_f1(const std::vector<int>& gold, const std::vector<int>& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predicted label lists differ in length");
  }
  if (gold.empty()) throw DataError("empty label lists");
  return pooled_stats(gold, pred).macro;
}

EvalReport cross_validate(const FeatureMatrix& data, std::size_t k, double l2, std::uint64_t seed) {
  const std::size_t n = data.x.rows();
  if (data.labels.size() != n) throw DataError("label count does not match row count");

  FoldAssignment folds = stratified_kfold(data.labels, k, seed);

  std::vector<int> pooled_pred(n, 0);
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (folds.fold_of[i] == fold ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty()) continue;
    if (train_rows.empty()) throw DataError("fold " + std::to_string(fold) + " has no training data");

    FeatureMatrix train;
    train.feature_names = data.feature_names;
    train.x = Matrix(train_rows.size(), data.x.cols());
    train.labels.reserve(train_rows.size());
    for (std::size_t r = 0; r < train_rows.size(); ++r) {
      std::copy(data.x.row(train_rows[r]), data.x.row(train_rows[r]) + data.x.cols(),
                train.x.row(r));
      train.labels.push_back(data.labels[train_rows[r]]);
    }
    const ClassifierModel model = fit_logreg(train, l2);

    Matrix test(test_rows.size(), data.x.cols());
    for (std::size_t r = 0; r < test_rows.size(); ++r) {
      std::copy(data.x.row(test_rows[r]), data.x.row(test_rows[r]) + data.x.cols(), test.row(r));
    }
    const std::vector<int> preds = predict(model, test);
    for (std::size_t r = 0; r < test_rows.size(); ++r) pooled_pred[test_rows[r]] = preds[r];
  }

  const PooledStats stats = pooled_stats(data.labels, pooled_pred);
  EvalReport report;
  report.macro_f1_score = stats.macro;
  report.fold_count = k;
  report.per_class = stats.per_class;
  report.confusion_labels = stats.confusion_labels;
  report.confusion = stats.confusion;
  report.warnings = std::move(folds.warnings);
  return report;
}

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << "method\tregime\tfolds\tmacro_f1\n";
  out << report.method << '\t' << report.regime << '\t' << report.fold_count << '\t'
      << format_fixed6(report.macro_f1_score) << '\n';
  out << "class\tprecision\trecall\tf1\tsupport\n";
  for (const auto& cs : report.per_class) {
    out << cs.label << '\t' << format_fixed6(cs.precision) << '\t' << format_fixed6(cs.recall)
        << '\t' << format_fixed6(cs.f1) << '\t' << cs.support << '\n';
  }
}

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  os << "method=" << report.method;
  if (!report.regime.empty()) os << " regime=" << report.regime;
  os << " folds=" << report.fold_count << " macro-F1=" << format_fixed6(report.macro_f1_score)
     << "\n";
  for (const auto& cs : report.per_class) {
    os << "  class " << cs.label << ": P=" << format_fixed6(cs.precision)
       << " R=" << format_fixed6(cs.recall) << " F1=" << format_fixed6(cs.f1)
       << " support=" << cs.support << "\n";
  }
  os << "  confusion (rows gold, cols predicted; labels";
  for (const int l : report.confusion_labels) os << ' ' << l;
  os << "):\n";
  for (std::size_t i = 0; i < report.confusion.size(); ++i) {
    os << "   ";
    for (const std::size_t c : report.confusion[i]) os << ' ' << c;
    os << "\n";
  }
  for (const auto& w : report.warnings) os << "  warning: " << w << "\n";
  if (!report.skipped_words.empty()) {
    os << "  skipped " << report.skipped_words.size() << " out-of-vocabulary word(s):";
    for (const auto& w : report.skipped_words) os << ' ' << w;
    os << "\n";
  }
  return os.str();
}

}  // namespace shiftscan
