#include "foodqa/trainer.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "foodqa/error.hpp"

namespace foodqa {

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs}, {"lr", lr},       {"batch", batch}, {"negatives", negatives},
          {"beta1", beta1},   {"beta2", beta2}, {"eps", eps},     {"seed", seed}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j, TrainConfig c) {
  c.epochs = j.value("epochs", c.epochs);
  c.lr = j.value("lr", c.lr);
  c.batch = j.value("batch", c.batch);
  c.negatives = j.value("negatives", c.negatives);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.eps = j.value("eps", c.eps);
  c.seed = j.value("seed", c.seed);
  return c;
}

std::vector<Triplet> sample_triplets(const TrainingExample& ex, std::size_t example_index,
                                     std::size_t k, Rng& rng) {
  std::vector<Triplet> out;
  if (ex.negatives.empty()) return out;
  for (std::size_t p : ex.positives) {
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back({example_index, p, ex.negatives[uniform_index(rng, ex.negatives.size())]});
    }
  }
  return out;
}

namespace {

// Loss of the triplets belonging to one example.
double example_loss(const EmbeddingModel& model, const TrainingExample& ex,
                    std::span<const Triplet> triplets, Gradients* grad, const Encoder& enc) {
  const auto q = enc.encode_query(model, ex.query);
  std::map<std::size_t, std::vector<double>> answers;
  for (const auto& t : triplets) {
    for (std::size_t c : {t.positive, t.negative}) {
      if (!answers.contains(c)) answers.emplace(c, enc.encode_answer(model, ex.candidates.at(c)));
    }
  }
  const std::size_t dim = q.size();
  std::vector<double> dq(dim, 0.0);
  std::map<std::size_t, std::vector<double>> da;
  double loss = 0.0;
  for (const auto& t : triplets) {
    const auto& ap = answers.at(t.positive);
    const auto& an = answers.at(t.negative);
    const double h = hinge(score(q, ap), score(q, an));
    loss += h;
    if (!grad || h <= 0.0) continue;
    auto& gp = da[t.positive];
    auto& gn = da[t.negative];
    if (gp.empty()) gp.assign(dim, 0.0);
    if (gn.empty()) gn.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      dq[k] += an[k] - ap[k];
      gp[k] -= q[k];
      gn[k] += q[k];
    }
  }
  if (grad) {
    enc.backward_query(model, ex.query, dq, *grad);
    for (const auto& [c, g] : da) enc.backward_answer(model, ex.candidates[c], g, *grad);
  }
  return loss;
}

}  // namespace

double triplet_loss(const EmbeddingModel& model, std::span<const TrainingExample> examples,
                    std::span<const Triplet> triplets, Gradients* grad, const Encoder& encoder) {
  std::map<std::size_t, std::vector<Triplet>> by_example;
  for (const auto& t : triplets) by_example[t.example].push_back(t);
  double loss = 0.0;
  for (const auto& [e, ts] : by_example) {
    loss += example_loss(model, examples[e], ts, grad, encoder);
  }
  return loss;
}

void Adam::prepare(const EmbeddingModel& model) {
  for (std::size_t t = 0; t < kTableCount; ++t) {
    const auto& tab = model.tables[t];
    if (state_.m[t].rows() != tab.rows() || state_.m[t].cols() != tab.cols()) {
      state_.m[t] = Matrix(tab.rows(), tab.cols());
      state_.v[t] = Matrix(tab.rows(), tab.cols());
    }
  }
}

void Adam::step(EmbeddingModel& model, const Gradients& grad) {
  prepare(model);
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t tab = 0; tab < kTableCount; ++tab) {
    auto& w = model.tables[tab].data();
    auto& m = state_.m[tab].data();
    auto& v = state_.v[tab].data();
    const std::size_t cols = model.tables[tab].cols();
    std::vector<double> g(w.size(), 0.0);
    for (const auto& [row, gr] : grad.rows[tab]) {
      std::copy(gr.begin(), gr.end(), g.begin() + static_cast<long>(row * cols));
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      w[i] -= cfg_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.eps);
    }
  }
}

TrainReport train(EmbeddingModel& model, OptimizerState& optimizer,
                  std::span<const TrainingExample> examples, const TrainConfig& cfg,
                  const Encoder& encoder) {
  if (cfg.batch == 0) throw std::invalid_argument("batch size must be positive");
  TrainReport report;
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.candidates.empty() || ex.positives.empty() || ex.negatives.empty()) {
      ++report.skipped;
    } else {
      usable.push_back(i);
    }
  }
  Adam adam(cfg, optimizer);
  adam.prepare(model);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order = usable;
    Rng order_rng = make_rng(cfg.seed, "epoch-order", epoch);
    shuffle(order, order_rng);
    double epoch_sum = 0.0;
    std::size_t epoch_triplets = 0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      const long n = static_cast<long>(end - start);
      std::vector<Gradients> grads(static_cast<std::size_t>(n));
      std::vector<double> losses(static_cast<std::size_t>(n), 0.0);
      std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(dynamic, 1)
      for (long b = 0; b < n; ++b) {
        const std::size_t e = order[start + static_cast<std::size_t>(b)];
        Rng rng = make_rng(cfg.seed, "negatives", epoch * examples.size() + e);
        const auto triplets = sample_triplets(examples[e], 0, cfg.negatives, rng);
        counts[b] = triplets.size();
        losses[b] = example_loss(model, examples[e], triplets, &grads[b], encoder);
      }
      Gradients total;
      double loss = 0.0;
      std::size_t count = 0;
      for (long b = 0; b < n; ++b) {
        total.merge(grads[b]);
        loss += losses[b];
        count += counts[b];
      }
      if (!std::isfinite(loss)) {
        std::ostringstream os;
        os << "non-finite loss at epoch " << epoch + 1 << " step " << report.steps + 1
           << " (batch starting at example " << order[start] << ")";
        throw NumericalError(os.str());
      }
      adam.step(model, total);
      ++report.steps;
      report.step_loss.push_back(count ? loss / static_cast<double>(count) : 0.0);
      epoch_sum += loss;
      epoch_triplets += count;
    }
    if (!model.finite()) {
      throw NumericalError("non-finite parameter after epoch " + std::to_string(epoch + 1));
    }
    report.epoch_loss.push_back(epoch_triplets ? epoch_sum / static_cast<double>(epoch_triplets)
                                               : 0.0);
  }
  return report;
}

void write_loss_csv(const std::string& path, const TrainReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write loss curve '" + path + "'");
  out << "step,loss\n";
  out.precision(10);
  for (std::size_t i = 0; i < report.step_loss.size(); ++i) {
    out << i + 1 << ',' << report.step_loss[i] << '\n';
  }
}

}  // namespace foodqa
