#include "gcfx/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "gcfx/rng.hpp"

namespace gcfx {

void TrainConfig::validate() const {
  model.validate();
  if (beta < 0 || gamma < 0)
    throw Error(ErrorKind::config, "objective_trainer",
                "beta and gamma must be non-negative");
  if (epochs < 0)
    throw Error(ErrorKind::config, "objective_trainer",
                "epochs must be non-negative");
  if (batch_size < 1)
    throw Error(ErrorKind::config, "objective_trainer",
                "batch_size must be positive");
  if (!(learning_rate > 0))
    throw Error(ErrorKind::config, "objective_trainer",
                "learning_rate must be positive");
  if (threads < 1)
    throw Error(ErrorKind::config, "objective_trainer",
                "threads must be positive");
}

namespace {

struct Adam {
  ModelParams m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step_count = 0;

  explicit Adam(const ModelParams& shape)
      : m(zero_like(shape)), v(zero_like(shape)) {}

  void step(ModelParams& params, const ModelParams& grad, double lr) {
    ++step_count;
    const double c1 = 1.0 - std::pow(beta1, step_count);
    const double c2 = 1.0 - std::pow(beta2, step_count);
    // one fixed traversal order for every state tensor
    std::vector<Mat*> ps, ms, vs;
    std::vector<const Mat*> gs;
    visit_params(params, [&](const std::string&, Mat& x) { ps.push_back(&x); });
    visit_params(m, [&](const std::string&, Mat& x) { ms.push_back(&x); });
    visit_params(v, [&](const std::string&, Mat& x) { vs.push_back(&x); });
    visit_params(grad,
                 [&](const std::string&, const Mat& x) { gs.push_back(&x); });
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Mat& p = *ps[i];
      Mat& mi = *ms[i];
      Mat& vi = *vs[i];
      const Mat& g = *gs[i];
      for (Eigen::Index r = 0; r < p.rows(); ++r)
        for (Eigen::Index c = 0; c < p.cols(); ++c) {
          mi(r, c) = beta1 * mi(r, c) + (1.0 - beta1) * g(r, c);
          vi(r, c) = beta2 * vi(r, c) + (1.0 - beta2) * g(r, c) * g(r, c);
          const double mhat = mi(r, c) / c1;
          const double vhat = vi(r, c) / c2;
          p(r, c) -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
  }
};

void add_params(ModelParams& into, const ModelParams& other) {
  std::vector<const Mat*> src;
  visit_params(other,
               [&](const std::string&, const Mat& x) { src.push_back(&x); });
  std::size_t i = 0;
  visit_params(into,
               [&](const std::string&, Mat& x) { x += *src[i++]; });
}

bool params_finite(const ModelParams& p) {
  bool ok = true;
  visit_params(p, [&](const std::string&, const Mat& x) {
    if (!x.allFinite()) ok = false;
  });
  return ok;
}

}  // namespace

TrainResult train(const std::vector<Graph>& dataset, const TrainConfig& cfg,
                  ModelParams init) {
  cfg.validate();
  if (dataset.empty())
    throw Error(ErrorKind::argument, "objective_trainer", "empty dataset");
  for (const auto& g : dataset)
    if (g.node_features.cols() != cfg.model.d_in)
      throw Error(ErrorKind::config, "objective_trainer",
                  "graph " + std::to_string(g.graph_id) +
                      " feature width mismatch");
  check_params(init, cfg.model);

  TrainResult out;
  out.params = std::move(init);
  Adam adam(out.params);
  const LossOptions opt{cfg.beta, cfg.gamma, 0.0};
  const int n = static_cast<int>(dataset.size());

  ModelParams epoch_start = out.params;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    epoch_start = out.params;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    {
      auto eng = rng::stream(cfg.seed, rng::kShuffle,
                             static_cast<std::uint64_t>(epoch));
      std::shuffle(order.begin(), order.end(), eng);
    }

    LossParts epoch_sum;
    bool bad = false;
    for (int start = 0; start < n && !bad; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, n - start);
      std::vector<ModelParams> grads(count);
      std::vector<LossParts> parts(count);
      std::vector<std::string> failures(count);

      const auto worker_body = [&](int slot) {
        const Graph& g = dataset[order[start + slot]];
        try {
          grads[slot] = zero_like(out.params);
          const NoiseBundle noise =
              make_noise(cfg.model, g.node_count, cfg.seed, g.graph_id, epoch);
          parts[slot] = backprop_loss(g, out.params, cfg.model, opt, noise,
                                      grads[slot]);
        } catch (const Error& e) {
          failures[slot] = e.what();
        }
      };

      if (cfg.threads == 1 || count == 1) {
        for (int slot = 0; slot < count; ++slot) worker_body(slot);
      } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min(cfg.threads, count);
        for (int w = 0; w < workers; ++w)
          pool.emplace_back([&] {
            for (int slot = next.fetch_add(1); slot < count;
                 slot = next.fetch_add(1))
              worker_body(slot);
          });
        for (auto& th : pool) th.join();
      }

      for (int slot = 0; slot < count; ++slot)
        if (!failures[slot].empty()) bad = true;
      if (bad) break;

      // deterministic reduction: slot order, then scale by 1/batch
      ModelParams batch_grad = zero_like(out.params);
      for (int slot = 0; slot < count; ++slot)
        add_params(batch_grad, grads[slot]);
      visit_params(batch_grad, [&](const std::string&, Mat& x) {
        x *= 1.0 / static_cast<double>(count);
      });
      for (int slot = 0; slot < count; ++slot) {
        epoch_sum.total += parts[slot].total;
        epoch_sum.l_agg += parts[slot].l_agg;
        epoch_sum.l_c_prior += parts[slot].l_c_prior;
        epoch_sum.l_l_prior += parts[slot].l_l_prior;
        epoch_sum.l_reg += parts[slot].l_reg;
      }

      adam.step(out.params, batch_grad, cfg.learning_rate);
      if (!params_finite(out.params)) bad = true;
    }

    if (bad) {
      out.params = epoch_start;
      out.aborted_nan = true;
      return out;
    }

    EpochLog log;
    log.epoch = epoch;
    log.mean.total = epoch_sum.total / n;
    log.mean.l_agg = epoch_sum.l_agg / n;
    log.mean.l_c_prior = epoch_sum.l_c_prior / n;
    log.mean.l_l_prior = epoch_sum.l_l_prior / n;
    log.mean.l_reg = epoch_sum.l_reg / n;
    out.history.push_back(log);
    out.epochs_run = epoch;
  }
  return out;
}

TrainResult train(const std::vector<Graph>& dataset, const TrainConfig& cfg) {
  return train(dataset, cfg, init_params(cfg.model, cfg.seed));
}

double gradient_check(const Graph& g, const ModelParams& params,
                      const ModelConfig& cfg, const LossOptions& opt,
                      const NoiseBundle& noise, double epsilon) {
  if (cfg.mask_mode == MaskMode::hard && cfg.accum_iters > 0)
    throw Error(ErrorKind::config, "objective_trainer",
                "gradient_check needs soft masks (hard indicators have no "
                "gradient)");
  if (!(epsilon > 0))
    throw Error(ErrorKind::argument, "objective_trainer",
                "epsilon must be positive");

  ModelParams analytic = zero_like(params);
  backprop_loss(g, params, cfg, opt, noise, analytic);

  std::vector<const Mat*> ga;
  visit_params(analytic,
               [&](const std::string&, const Mat& x) { ga.push_back(&x); });

  ModelParams probe = params;
  std::vector<Mat*> pm;
  visit_params(probe, [&](const std::string&, Mat& x) { pm.push_back(&x); });

  double max_rel = 0.0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    Mat& p = *pm[i];
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cols(); ++c) {
        const double saved = p(r, c);
        p(r, c) = saved + epsilon;
        const double up = loss_deepgcfx(g, probe, cfg, opt, noise).total;
        p(r, c) = saved - epsilon;
        const double down = loss_deepgcfx(g, probe, cfg, opt, noise).total;
        p(r, c) = saved;
        const double fd = (up - down) / (2.0 * epsilon);
        const double an = (*ga[i])(r, c);
        const double scale = std::max(std::abs(fd), std::abs(an));
        if (scale < 1e-10) continue;
        max_rel = std::max(max_rel, std::abs(fd - an) / scale);
      }
  }
  return max_rel;
}

}  // namespace gcfx
