#ifndef FAQRANK_GBRT_HPP
#define FAQRANK_GBRT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace faqrank {

struct GbrtParams {
    int n_trees = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_samples_leaf = 1;
    std::uint64_t seed = 0;  // carried for reproducible configs; the fit itself
                             // is deterministic (no row/column subsampling)
};

/// Row-major dense feature matrix.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::size_t n_cols) : n_cols_(n_cols) {}

    void push_row(std::span<const double> row);
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * n_cols_, n_cols_};
    }
    std::size_t rows() const { return n_cols_ == 0 ? 0 : data_.size() / n_cols_; }
    std::size_t cols() const { return n_cols_; }

private:
    std::size_t n_cols_ = 0;
    std::vector<double> data_;
};

/// Flat binary tree; leaves have feature == -1.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;
};

/// CART step for one boosting stage: greedy binary splits minimising squared
/// error, split candidates at midpoints between consecutive distinct feature
/// values, ties broken by lowest feature index then lowest threshold. Leaf
/// value is the mean residual.
RegressionTree fit_tree(const FeatureMatrix& x, std::span<const double> residuals,
                        const GbrtParams& params);

/// Additive ensemble with shrinkage: prediction = base + lr * sum of trees.
class GbrtModel {
public:
    static GbrtModel fit(const FeatureMatrix& x, std::span<const double> y,
                         const GbrtParams& params);

    /// Zero-tree model predicting a constant; stands in when a training set
    /// came out empty.
    static GbrtModel constant(double value, std::size_t n_features, const GbrtParams& params);

    double predict(std::span<const double> x) const;
    /// Prediction using only the first n_trees stages (diagnostics/tests).
    double predict_prefix(std::span<const double> x, std::size_t n_trees) const;

    double base_prediction() const { return base_; }
    const std::vector<RegressionTree>& trees() const { return trees_; }
    const GbrtParams& params() const { return params_; }
    std::size_t n_features() const { return n_features_; }

    nlohmann::ordered_json to_json() const;
    static GbrtModel from_json(const nlohmann::json& j);

private:
    double base_ = 0.0;
    std::vector<RegressionTree> trees_;
    GbrtParams params_;
    std::size_t n_features_ = 0;
};

}  // namespace faqrank

#endif
