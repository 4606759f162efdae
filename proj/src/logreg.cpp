#include "shiftscan/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "shiftscan/error.hpp"

namespace shiftscan {

namespace {

struct Params {
  Matrix w;                // K x F
  std::vector<double> b;   // K
};

void softmax_row(const double* logits, std::size_t k, double* probs) {
  double mx = logits[0];
  for (std::size_t c = 1; c < k; ++c) mx = std::max(mx, logits[c]);
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    probs[c] = std::exp(logits[c] - mx);
    sum += probs[c];
  }
  for (std::size_t c = 0; c < k; ++c) probs[c] /= sum;
}

// Mean NLL + (l2 / 2n) ||W||^2, with gradients. Same minimizer as the
// sum-form objective with penalty l2/2 ||W||^2.
double objective_and_grad(const Matrix& x, const std::vector<std::size_t>& y, std::size_t k,
                          double l2, const Params& p, Params* grad) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  if (grad) {
    grad->w = Matrix(k, f);
    grad->b.assign(k, 0.0);
  }
  std::vector<double> logits(k);
  std::vector<double> probs(k);
  double nll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double s = p.b[c];
      const double* wc = p.w.row(c);
      for (std::size_t j = 0; j < f; ++j) s += wc[j] * xi[j];
      logits[c] = s;
    }
    softmax_row(logits.data(), k, probs.data());
    nll -= std::log(std::max(probs[y[i]], 1e-300));
    if (grad) {
      for (std::size_t c = 0; c < k; ++c) {
        const double err = probs[c] - (c == y[i] ? 1.0 : 0.0);
        grad->b[c] += err;
        double* gw = grad->w.row(c);
        for (std::size_t j = 0; j < f; ++j) gw[j] += err * xi[j];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double penalty = 0.0;
  for (const double w : p.w.data()) penalty += w * w;
  const double obj = nll * inv_n + 0.5 * l2 * penalty * inv_n;
  if (grad) {
    for (auto& g : grad->w.data()) g *= inv_n;
    for (auto& g : grad->b) g *= inv_n;
    for (std::size_t idx = 0; idx < grad->w.data().size(); ++idx) {
      grad->w.data()[idx] += l2 * inv_n * p.w.data()[idx];
    }
  }
  return obj;
}

double grad_max_norm(const Params& g) {
  double mx = 0.0;
  for (const double v : g.w.data()) mx = std::max(mx, std::abs(v));
  for (const double v : g.b) mx = std::max(mx, std::abs(v));
  return mx;
}

}  // namespace

ClassifierModel fit_logreg(const FeatureMatrix& data, double l2) {
  const std::size_t n = data.x.rows();
  const std::size_t f = data.x.cols();
  if (n == 0 || f == 0) throw DataError("empty feature matrix");
  if (data.labels.size() != n) throw DataError("label count does not match row count");
  if (l2 < 0.0) throw DataError("l2 must be non-negative");

  ClassifierModel model;
  {
    const std::set<int> distinct(data.labels.begin(), data.labels.end());
    model.classes.assign(distinct.begin(), distinct.end());
  }
  if (model.classes.size() < 2) throw DataError("need at least 2 classes to fit a classifier");

  // z-scoring parameters from this data only
  model.feat_mean.assign(f, 0.0);
  model.feat_std.assign(f, 0.0);
  for (std::size_t j = 0; j < f; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data.x.at(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data.x.at(i, j) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd < 1e-12) {
      throw DataError("constant feature '" +
                      (j < data.feature_names.size() ? data.feature_names[j] : std::to_string(j)) +
                      "' cannot be standardized");
    }
    model.feat_mean[j] = mean;
    model.feat_std[j] = sd;
  }

  Matrix xs(n, f);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      xs.at(i, j) = (data.x.at(i, j) - model.feat_mean[j]) / model.feat_std[j];
    }
  }
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), data.labels[i]);
    y[i] = static_cast<std::size_t>(it - model.classes.begin());
  }

  const std::size_t k = model.classes.size();
  Params params{Matrix(k, f), std::vector<double>(k, 0.0)};
  Params grad;
  double obj = objective_and_grad(xs, y, k, l2, params, &grad);
  model.objective_trace.push_back(obj);

  double step = 1.0;
  constexpr int kMaxIters = 5000;
  constexpr double kGradTol = 1e-6;
  for (int iter = 0; iter < kMaxIters && grad_max_norm(grad) > kGradTol; ++iter) {
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      Params trial = params;
      for (std::size_t idx = 0; idx < trial.w.data().size(); ++idx) {
        trial.w.data()[idx] -= step * grad.w.data()[idx];
      }
      for (std::size_t c = 0; c < k; ++c) trial.b[c] -= step * grad.b[c];
      Params trial_grad;
      const double trial_obj = objective_and_grad(xs, y, k, l2, trial, &trial_grad);
      if (trial_obj <= obj) {
        params = std::move(trial);
        grad = std::move(trial_grad);
        obj = trial_obj;
        model.objective_trace.push_back(obj);
        step *= 1.2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: numerically converged
  }

  model.weights = std::move(params.w);
  model.intercepts = std::move(params.b);
  return model;
}

Matrix predict_proba(const ClassifierModel& model, const Matrix& rows) {
  const std::size_t f = model.weights.cols();
  if (rows.cols() != f) {
    throw DataError("feature count mismatch: model expects " + std::to_string(f) + ", got " +
                    std::to_string(rows.cols()));
  }
  const std::size_t k = model.classes.size();
  Matrix probs(rows.rows(), k);
  std::vector<double> logits(k);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double s = model.intercepts[c];
      for (std::size_t j = 0; j < f; ++j) {
        const double z = (rows.at(i, j) - model.feat_mean[j]) / model.feat_std[j];
        s += model.weights.at(c, j) * z;
      }
      logits[c] = s;
    }
    softmax_row(logits.data(), k, probs.row(i));
  }
  return probs;
}

std::vector<int> predict(const ClassifierModel& model, const Matrix& rows) {
  const Matrix probs = predict_proba(model, rows);
  std::vector<int> out(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < model.classes.size(); ++c) {
      if (probs.at(i, c) > probs.at(i, best)) best = c;  // ties keep the smaller label
    }
    out[i] = model.classes[best];
  }
  return out;
}

}  // namespace shiftscan
