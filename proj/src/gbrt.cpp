#include "faqrank/gbrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "faqrank/util.hpp"

namespace faqrank {

void FeatureMatrix::push_row(std::span<const double> row) {
    if (n_cols_ == 0) n_cols_ = row.size();
    if (row.size() != n_cols_) throw Error("feature matrix: ragged row");
    data_.insert(data_.end(), row.begin(), row.end());
}

double RegressionTree::predict(std::span<const double> x) const {
    std::int32_t node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

struct BestSplit {
    bool found = false;
    std::int32_t feature = -1;
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

double sum_over(std::span<const double> residuals, const std::vector<std::uint32_t>& idx) {
    double s = 0;
    for (const std::uint32_t i : idx) s += residuals[i];
    return s;
}

// Exhaustive scan of one node. SSE of a candidate split is computed from
// prefix sums: sum((r - mean)^2) = sum(r^2) - (sum r)^2 / n per side.
BestSplit find_split(const FeatureMatrix& x, std::span<const double> residuals,
                     const std::vector<std::uint32_t>& idx, const GbrtParams& params,
                     double node_sse) {
    BestSplit best;
    const std::size_t n = idx.size();
    const auto min_leaf = static_cast<std::size_t>(params.min_samples_leaf);
    if (n < 2 * min_leaf) return best;

    std::vector<std::pair<double, double>> vals(n);  // (feature value, residual)
    for (std::size_t f = 0; f < x.cols(); ++f) {
        for (std::size_t k = 0; k < n; ++k) {
            vals[k] = {x.row(idx[k])[f], residuals[idx[k]]};
        }
        std::sort(vals.begin(), vals.end());

        double left_sum = 0, left_sq = 0;
        double total_sum = 0, total_sq = 0;
        for (const auto& [v, r] : vals) {
            total_sum += r;
            total_sq += r * r;
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            left_sum += vals[k].second;
            left_sq += vals[k].second * vals[k].second;
            if (vals[k].first == vals[k + 1].first) continue;  // no boundary here
            const std::size_t nl = k + 1;
            const std::size_t nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double right_sum = total_sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                               (right_sq - right_sum * right_sum / static_cast<double>(nr));
            if (sse < best.sse && sse < node_sse) {
                best.found = true;
                best.feature = static_cast<std::int32_t>(f);
                best.threshold = vals[k].first + (vals[k + 1].first - vals[k].first) / 2.0;
                best.sse = sse;
            }
        }
    }
    return best;
}

std::int32_t grow(const FeatureMatrix& x, std::span<const double> residuals,
                  std::vector<std::uint32_t> idx, int depth, const GbrtParams& params,
                  RegressionTree& tree) {
    const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();

    const double sum = sum_over(residuals, idx);
    const double mean = sum / static_cast<double>(idx.size());

    if (depth >= params.max_depth) {
        tree.nodes[static_cast<std::size_t>(node_id)].value = mean;
        return node_id;
    }

    double sq = 0;
    for (const std::uint32_t i : idx) sq += residuals[i] * residuals[i];
    const double node_sse = sq - sum * sum / static_cast<double>(idx.size());
    if (node_sse <= 0) {  // constant residuals: no split can improve
        tree.nodes[static_cast<std::size_t>(node_id)].value = mean;
        return node_id;
    }

    const BestSplit split = find_split(x, residuals, idx, params, node_sse);
    if (!split.found) {
        tree.nodes[static_cast<std::size_t>(node_id)].value = mean;
        return node_id;
    }

    std::vector<std::uint32_t> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (const std::uint32_t i : idx) {
        if (x.row(i)[static_cast<std::size_t>(split.feature)] <= split.threshold) {
            left_idx.push_back(i);
        } else {
            right_idx.push_back(i);
        }
    }
    idx.clear();
    idx.shrink_to_fit();

    const std::int32_t left = grow(x, residuals, std::move(left_idx), depth + 1, params, tree);
    const std::int32_t right = grow(x, residuals, std::move(right_idx), depth + 1, params, tree);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return node_id;
}

}  // namespace

RegressionTree fit_tree(const FeatureMatrix& x, std::span<const double> residuals,
                        const GbrtParams& params) {
    if (x.rows() == 0 || x.rows() != residuals.size()) {
        throw Error("fit_tree: empty input or size mismatch");
    }
    if (params.max_depth < 1 || params.min_samples_leaf < 1) {
        throw Error("fit_tree: max_depth and min_samples_leaf must be positive");
    }
    std::vector<std::uint32_t> idx(x.rows());
    std::iota(idx.begin(), idx.end(), 0);
    RegressionTree tree;
    grow(x, residuals, std::move(idx), 0, params, tree);
    return tree;
}

GbrtModel GbrtModel::constant(double value, std::size_t n_features, const GbrtParams& params) {
    GbrtModel model;
    model.base_ = value;
    model.params_ = params;
    model.n_features_ = n_features;
    return model;
}

GbrtModel GbrtModel::fit(const FeatureMatrix& x, std::span<const double> y,
                         const GbrtParams& params) {
    if (x.rows() == 0) throw Error("gbrt fit: empty training set");
    if (x.rows() != y.size()) throw Error("gbrt fit: X/y size mismatch");
    if (params.n_trees < 0) throw Error("gbrt fit: n_trees must be non-negative");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        throw Error("gbrt fit: learning_rate must be in (0,1]");
    }

    GbrtModel model;
    model.params_ = params;
    model.n_features_ = x.cols();
    model.base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

    std::vector<double> residuals(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) residuals[i] = y[i] - model.base_;

    model.trees_.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        RegressionTree tree = fit_tree(x, residuals, params);
        for (std::size_t i = 0; i < y.size(); ++i) {
            residuals[i] -= params.learning_rate * tree.predict(x.row(i));
        }
        model.trees_.push_back(std::move(tree));
    }
    return model;
}

double GbrtModel::predict(std::span<const double> x) const {
    return predict_prefix(x, trees_.size());
}

double GbrtModel::predict_prefix(std::span<const double> x, std::size_t n_trees) const {
    if (x.size() != n_features_) throw Error("gbrt predict: feature dimension mismatch");
    double out = base_;
    const std::size_t n = std::min(n_trees, trees_.size());
    for (std::size_t t = 0; t < n; ++t) {
        out += params_.learning_rate * trees_[t].predict(x);
    }
    return out;
}

nlohmann::ordered_json GbrtModel::to_json() const {
    nlohmann::ordered_json j;
    j["base_prediction"] = base_;
    j["n_features"] = n_features_;
    j["params"] = {{"n_trees", params_.n_trees},
                   {"max_depth", params_.max_depth},
                   {"learning_rate", params_.learning_rate},
                   {"min_samples_leaf", params_.min_samples_leaf},
                   {"seed", params_.seed}};
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : trees_) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
        }
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j;
}

GbrtModel GbrtModel::from_json(const nlohmann::json& j) {
    GbrtModel model;
    model.base_ = j.at("base_prediction").get<double>();
    model.n_features_ = j.at("n_features").get<std::size_t>();
    const auto& p = j.at("params");
    model.params_.n_trees = p.at("n_trees").get<int>();
    model.params_.max_depth = p.at("max_depth").get<int>();
    model.params_.learning_rate = p.at("learning_rate").get<double>();
    model.params_.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    model.params_.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& tj : j.at("trees")) {
        RegressionTree tree;
        for (const auto& nj : tj) {
            TreeNode n;
            n.feature = nj.at(0).get<std::int32_t>();
            n.threshold = nj.at(1).get<double>();
            n.left = nj.at(2).get<std::int32_t>();
            n.right = nj.at(3).get<std::int32_t>();
            n.value = nj.at(4).get<double>();
            tree.nodes.push_back(n);
        }
        model.trees_.push_back(std::move(tree));
    }
    return model;
}

}  // namespace faqrank
