#include "firetke/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "firetke/csv.hpp"

namespace firetke::stats {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_pair(std::span<const double> x, std::span<const double> y,
                std::size_t min_len, const char* who) {
  if (x.size() != y.size())
    throw std::invalid_argument(fmt::format("{}: length mismatch ({} vs {})",
                                            who, x.size(), y.size()));
  if (x.size() < min_len)
    throw std::invalid_argument(
        fmt::format("{}: need at least {} points, got {}", who, min_len, x.size()));
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2, "pearson");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::runtime_error("pearson: zero-variance input, coefficient undefined");
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred, 2, "r_squared");
  const double mean = mean_of(y_true);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double res = y_true[i] - y_pred[i];
    const double dev = y_true[i] - mean;
    ss_res += res * res;
    ss_tot += dev * dev;
  }
  if (ss_tot == 0.0)
    throw std::runtime_error("r_squared: y_true has zero variance");
  return 1.0 - ss_res / ss_tot;
}

double mse(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred, 1, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double res = y_true[i] - y_pred[i];
    sum += res * res;
  }
  return sum / static_cast<double>(y_true.size());
}

double mae(std::span<const double> y_true, std::span<const double> y_pred) {
  check_pair(y_true, y_pred, 1, "mae");
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    sum += std::abs(y_true[i] - y_pred[i]);
  return sum / static_cast<double>(y_true.size());
}

CorrelationMatrix correlation_matrix(const Dataset& dataset) {
  if (dataset.rows() < 2)
    throw std::invalid_argument("correlation_matrix: need at least 2 rows");

  CorrelationMatrix out;
  for (const auto& name : dataset.feature_names) out.labels.push_back(name);
  out.labels.push_back(dataset.target_name.empty() ? "target" : dataset.target_name);

  const Eigen::Index d = dataset.cols() + 1;
  const std::size_t n = static_cast<std::size_t>(dataset.rows());

  // materialize columns (features then target) and their rank transforms
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < dataset.cols(); ++c) {
    cols[static_cast<std::size_t>(c)].assign(dataset.X.col(c).data(),
                                             dataset.X.col(c).data() + n);
  }
  cols[static_cast<std::size_t>(d - 1)].assign(dataset.y.data(), dataset.y.data() + n);
  std::vector<std::vector<double>> ranked(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < cols.size(); ++c) ranked[c] = average_ranks(cols[c]);

  out.pearson = Eigen::MatrixXd::Identity(d, d);
  out.spearman = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      try {
        const double p = pearson(cols[static_cast<std::size_t>(i)],
                                 cols[static_cast<std::size_t>(j)]);
        const double s = pearson(ranked[static_cast<std::size_t>(i)],
                                 ranked[static_cast<std::size_t>(j)]);
        out.pearson(i, j) = out.pearson(j, i) = p;
        out.spearman(i, j) = out.spearman(j, i) = s;
      } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format(
            "correlation_matrix: {} vs {}: {}",
            out.labels[static_cast<std::size_t>(i)],
            out.labels[static_cast<std::size_t>(j)], e.what()));
      }
    }
  }
  return out;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("silverman_bandwidth: need at least 2 values");
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  const double h = 0.9 * spread *
                   std::pow(static_cast<double>(values.size()), -0.2);
  if (!(h > 0.0))
    throw std::runtime_error(
        "silverman_bandwidth: all values identical, bandwidth is zero");
  return h;
}

KdeEstimate kde(std::span<const double> residuals, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("kde: need at least 2 grid points");
  KdeEstimate est;
  est.bandwidth = silverman_bandwidth(residuals);

  const auto [lo_it, hi_it] = std::minmax_element(residuals.begin(), residuals.end());
  const double lo = *lo_it - 5.0 * est.bandwidth;
  const double hi = *hi_it + 5.0 * est.bandwidth;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  const double n = static_cast<double>(residuals.size());
  const double norm = 1.0 / (n * est.bandwidth * std::sqrt(kTwoPi));
  est.grid.resize(static_cast<std::size_t>(grid_points));
  est.density.resize(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double g = lo + static_cast<double>(i) * step;
    double sum = 0.0;
    for (double r : residuals) {
      const double z = (g - r) / est.bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    est.grid[static_cast<std::size_t>(i)] = g;
    est.density[static_cast<std::size_t>(i)] = norm * sum;
  }
  return est;
}

void write_correlation_csv(const std::filesystem::path& path,
                           const std::vector<std::string>& labels,
                           const Eigen::MatrixXd& matrix) {
  if (static_cast<Eigen::Index>(labels.size()) != matrix.rows() ||
      matrix.rows() != matrix.cols())
    throw std::invalid_argument("write_correlation_csv: label/matrix size mismatch");
  std::string out;
  for (const auto& label : labels) {
    out += ',';
    out += label;
  }
  out += '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    out += labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      out += ',';
      out += csv::format_double(matrix(i, j));
    }
    out += '\n';
  }
  csv::atomic_write(path, out);
}

void write_kde_csv(const std::filesystem::path& path, const KdeEstimate& estimate) {
  std::string out = "x,density\n";
  for (std::size_t i = 0; i < estimate.grid.size(); ++i) {
    out += csv::format_double(estimate.grid[i]);
    out += ',';
    out += csv::format_double(estimate.density[i]);
    out += '\n';
  }
  csv::atomic_write(path, out);
}

}  // namespace firetke::stats
