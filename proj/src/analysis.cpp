#include "gcfx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcfx/accum.hpp"
#include "gcfx/decoders.hpp"
#include "gcfx/encoder.hpp"
#include "gcfx/latent.hpp"

namespace gcfx {
namespace {

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> row_to_vec(const Mat& m, Eigen::Index row) {
  std::vector<double> v(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) v[j] = m(row, j);
  return v;
}

std::vector<double> col_to_vec(const Mat& m, Eigen::Index col) {
  std::vector<double> v(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) v[i] = m(i, col);
  return v;
}

}  // namespace

SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error(ErrorKind::argument, "analysis",
                "spearman inputs differ in length");
  if (x.size() < 2)
    throw Error(ErrorKind::argument, "analysis",
                "spearman needs at least 2 points");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {sxy / std::sqrt(sxx * syy), false};
}

namespace {

/// Mean over rows of |spearman(z, rows(v))|; degenerate pairs contribute 0.
double mean_abs_corr(const Mat& z, const Mat& rows, int& degenerate) {
  if (z.cols() != rows.cols()) {
    // no elementwise pairing exists between unequal widths; degenerate point
    ++degenerate;
    return 0.0;
  }
  if (rows.rows() == 0) return 0.0;
  const std::vector<double> zv = row_to_vec(z, 0);
  double sum = 0.0;
  for (Eigen::Index v = 0; v < rows.rows(); ++v) {
    const SpearmanResult r = spearman(zv, row_to_vec(rows, v));
    if (r.degenerate) ++degenerate;
    sum += std::abs(r.value);
  }
  return sum / static_cast<double>(rows.rows());
}

}  // namespace

CorrelationTrace correlation_vs_iterations(const Graph& g,
                                           const Checkpoint& ckpt, int m_max,
                                           std::uint64_t seed) {
  if (m_max < 0)
    throw Error(ErrorKind::argument, "analysis", "m_max must be >= 0");
  const ModelConfig& mc = ckpt.config.model;
  const Mat H = encode(g, ckpt.params);

  CorrelationTrace trace;
  for (int i = 0; i <= m_max; ++i) {
    const AccumResult ar =
        i == 0 ? run_accum_random(H, ckpt.params.accum, seed)
               : run_accum(H, ckpt.params.accum, i, MaskMode::hard,
                           mc.soft_mask_tau);
    const Mat z_c = posterior_common(ar.h_c, ckpt.params.head_common).mu;
    const std::vector<GaussianPosterior> locals =
        posterior_locals(ar.H_l, ckpt.params.head_local);
    Mat Z_l(g.node_count, mc.d_latent);
    for (int v = 0; v < g.node_count; ++v) Z_l.row(v) = locals[v].mu;
    const Mat codes = decode_agg_codes(z_c, Z_l, ckpt.params.agg_mlp);
    const std::vector<GaussianPosterior> patch =
        posterior_locals(ar.H_c, ckpt.params.head_common);
    Mat Z_c_patch(g.node_count, mc.d_latent);
    for (int v = 0; v < g.node_count; ++v) Z_c_patch.row(v) = patch[v].mu;

    trace.corr_local.push_back(
        mean_abs_corr(z_c, Z_l, trace.degenerate_points));
    trace.corr_common_patch.push_back(
        mean_abs_corr(z_c, Z_c_patch, trace.degenerate_points));
    trace.corr_decoder.push_back(
        mean_abs_corr(z_c, codes, trace.degenerate_points));
  }
  return trace;
}

double mapd(const Mat& rows) {
  const Eigen::Index p = rows.rows();
  if (p < 2)
    throw Error(ErrorKind::argument, "analysis",
                "mapd needs at least 2 vectors, got " + std::to_string(p));
  const double d = static_cast<double>(rows.cols());
  double total = 0.0;
  for (Eigen::Index u = 0; u < p; ++u)
    for (Eigen::Index v = u + 1; v < p; ++v) {
      double abs_sum = 0.0;
      for (Eigen::Index k = 0; k < rows.cols(); ++k)
        abs_sum += std::abs(rows(u, k) - rows(v, k));
      total += abs_sum / d;
    }
  return 2.0 * total / (static_cast<double>(p) * (p - 1));
}

MapdReport mapd_report(const std::vector<Graph>& dataset,
                       const Checkpoint& ckpt) {
  const ModelConfig& mc = ckpt.config.model;
  MapdReport report;
  int lower = 0;
  for (const Graph& g : dataset) {
    if (g.node_count < 2) {
      ++report.skipped_single_node;
      continue;
    }
    const Mat H = encode(g, ckpt.params);
    const AccumResult ar =
        mc.accum_iters > 0
            ? run_accum(H, ckpt.params.accum, mc.accum_iters, MaskMode::hard,
                        mc.soft_mask_tau)
            : run_accum_random(H, ckpt.params.accum,
                               static_cast<std::uint64_t>(g.graph_id));
    const double mc_val = mapd(ar.H_c);
    const double ml_val = mapd(ar.H_l);
    report.graph_ids.push_back(g.graph_id);
    report.per_graph_common.push_back(mc_val);
    report.per_graph_local.push_back(ml_val);
    if (mc_val < ml_val) ++lower;
  }
  const std::size_t used = report.graph_ids.size();
  if (used > 0) {
    report.mapd_common_mean =
        std::accumulate(report.per_graph_common.begin(),
                        report.per_graph_common.end(), 0.0) /
        static_cast<double>(used);
    report.mapd_local_mean =
        std::accumulate(report.per_graph_local.begin(),
                        report.per_graph_local.end(), 0.0) /
        static_cast<double>(used);
    report.fraction_common_lower =
        static_cast<double>(lower) / static_cast<double>(used);
  }
  return report;
}

CorrelationMatrixResult correlation_matrix(const Mat& common_samples,
                                           const Mat& local_samples) {
  if (common_samples.rows() != local_samples.rows())
    throw Error(ErrorKind::argument, "analysis",
                "sample counts differ between common and local matrices");
  if (common_samples.rows() < 2)
    throw Error(ErrorKind::argument, "analysis",
                "need at least 2 sample rows");
  CorrelationMatrixResult out;
  out.grid = Mat::Zero(common_samples.cols(), local_samples.cols());
  for (Eigen::Index a = 0; a < common_samples.cols(); ++a) {
    const std::vector<double> ca = col_to_vec(common_samples, a);
    for (Eigen::Index b = 0; b < local_samples.cols(); ++b) {
      const SpearmanResult r = spearman(ca, col_to_vec(local_samples, b));
      if (r.degenerate) ++out.degenerate_entries;
      out.grid(a, b) = std::abs(r.value);
    }
  }
  return out;
}

CorrelationMatrixResult correlation_matrix_split_half(
    const Mat& latent_samples) {
  const Eigen::Index d = latent_samples.cols();
  if (d < 2)
    throw Error(ErrorKind::argument, "analysis",
                "split-half baseline needs at least 2 latent dimensions");
  const Eigen::Index half = d / 2;
  return correlation_matrix(latent_samples.leftCols(half),
                            latent_samples.middleCols(half, half));
}

}  // namespace gcfx
