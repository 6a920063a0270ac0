#include "firetke/models/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace firetke::models {

double RegressionTree::predict_row(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  if (nodes.empty()) throw std::logic_error("RegressionTree: empty tree");
  int idx = 0;
  while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    idx = x(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(idx)].value;
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = predict_row(X.row(r));
  return out;
}

int RegressionTree::leaf_count() const {
  int count = 0;
  for (const auto& node : nodes)
    if (node.feature < 0) ++count;
  return count;
}

int RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  // depth via iterative walk; nodes store no parent links
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    auto [idx, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    if (node.feature >= 0) {
      stack.push_back({node.left, d + 1});
      stack.push_back({node.right, d + 1});
    }
  }
  return best;
}

namespace {

struct Builder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  const TreeGrowth& growth;
  Rng* rng;
  std::vector<TreeNode> nodes;
  std::vector<int> feature_pool;

  struct BestSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // raw criterion improvement
  };

  // Picks the features examined at this node. Without subsampling the full
  // pool keeps a fixed order so no randomness is consumed.
  std::vector<int> candidate_features() {
    const int d = static_cast<int>(X.cols());
    const int k = growth.feature_subsample;
    if (k <= 0 || k >= d || rng == nullptr) {
      std::vector<int> all(static_cast<std::size_t>(d));
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    // partial Fisher-Yates over the persistent pool; keep draw order
    std::vector<int> chosen(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng->below(static_cast<std::uint64_t>(d - i)));
      std::swap(feature_pool[static_cast<std::size_t>(i)], feature_pool[j]);
      chosen[static_cast<std::size_t>(i)] = feature_pool[static_cast<std::size_t>(i)];
    }
    return chosen;
  }

  BestSplit find_split(const std::vector<Eigen::Index>& rows) {
    const double alpha = growth.leaf_l2;
    const std::size_t n = rows.size();
    double total = 0.0;
    for (Eigen::Index r : rows) total += y(r);
    const double parent_score =
        total * total / (static_cast<double>(n) + alpha);

    BestSplit best;
    std::vector<std::pair<double, Eigen::Index>> sorted(n);
    for (const int feature : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i)
        sorted[i] = {X(rows[i], feature), rows[i]};
      std::sort(sorted.begin(), sorted.end());

      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += y(sorted[i].second);
        if (sorted[i].first == sorted[i + 1].first) continue;  // no boundary
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < static_cast<std::size_t>(growth.min_leaf) ||
            n_right < static_cast<std::size_t>(growth.min_leaf))
          continue;
        const double right_sum = total - left_sum;
        const double score =
            left_sum * left_sum / (static_cast<double>(n_left) + alpha) +
            right_sum * right_sum / (static_cast<double>(n_right) + alpha) -
            parent_score;
        if (!best.found || score > best.score) {
          best.found = true;
          best.feature = feature;
          best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          best.score = score;
        }
      }
    }
    return best;
  }

  int build(std::vector<Eigen::Index>&& rows, int depth) {
    const std::size_t n = rows.size();
    double sum = 0.0;
    double lo = y(rows.front());
    double hi = lo;
    for (Eigen::Index r : rows) {
      sum += y(r);
      lo = std::min(lo, y(r));
      hi = std::max(hi, y(r));
    }
    const double leaf_value = sum / (static_cast<double>(n) + growth.leaf_l2);

    const bool depth_exhausted = growth.max_depth >= 0 && depth >= growth.max_depth;
    const bool too_small = n < 2 * static_cast<std::size_t>(growth.min_leaf) || n < 2;
    const bool pure = lo == hi;

    const int node_idx = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{-1, 0.0, -1, -1, leaf_value});
    if (depth_exhausted || too_small || pure) return node_idx;

    const BestSplit split = find_split(rows);
    if (!split.found || !(0.5 * split.score > growth.split_penalty))
      return node_idx;

    std::vector<Eigen::Index> left_rows, right_rows;
    left_rows.reserve(n);
    right_rows.reserve(n);
    for (Eigen::Index r : rows)
      (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes[static_cast<std::size_t>(node_idx)].feature = split.feature;
    nodes[static_cast<std::size_t>(node_idx)].threshold = split.threshold;
    const int left = build(std::move(left_rows), depth + 1);
    nodes[static_cast<std::size_t>(node_idx)].left = left;
    const int right = build(std::move(right_rows), depth + 1);
    nodes[static_cast<std::size_t>(node_idx)].right = right;
    return node_idx;
  }
};

}  // namespace

RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const TreeGrowth& growth, Rng* rng,
                        const std::vector<Eigen::Index>* row_indices) {
  if (X.rows() != y.size())
    throw std::invalid_argument("fit_tree: X and y row counts differ");
  if (X.rows() < 1) throw std::invalid_argument("fit_tree: empty training set");
  if (growth.min_leaf < 1)
    throw std::invalid_argument("fit_tree: min_leaf must be >= 1");
  if (growth.leaf_l2 < 0.0 || growth.split_penalty < 0.0)
    throw std::invalid_argument("fit_tree: regularizers must be >= 0");

  std::vector<Eigen::Index> rows;
  if (row_indices != nullptr) {
    if (row_indices->empty())
      throw std::invalid_argument("fit_tree: empty row index set");
    rows = *row_indices;
  } else {
    rows.resize(static_cast<std::size_t>(X.rows()));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  }

  Builder builder{X, y, growth, rng, {}, {}};
  builder.feature_pool.resize(static_cast<std::size_t>(X.cols()));
  std::iota(builder.feature_pool.begin(), builder.feature_pool.end(), 0);
  builder.build(std::move(rows), 0);

  RegressionTree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

}  // namespace firetke::models
