#pragma once

#include <vector>

#include "gridcast/regressor.hpp"

namespace gridcast {

enum class SplitMode { exhaustive, random };

struct TreeParams {
    int min_samples_leaf = 1;
    int max_depth = -1;  // -1 = unlimited
    double ccp_alpha = 0.0;
    SplitMode split_mode = SplitMode::exhaustive;
    int features_per_split = -1;  // -1 = all features
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;  // mean target of the node's samples
    double rss = 0.0;
    int n = 0;
};

// Recursive binary splitting minimizing post-split RSS. Exhaustive mode
// scans all candidate (feature, threshold) midpoints among the sampled
// features; random mode draws one uniform cut per sampled feature and
// keeps the best. Equal-RSS ties break on (lower feature, lower
// threshold). Cost-complexity pruning collapses weakest links while
// their effective alpha is <= ccp_alpha.
class DecisionTreeRegressor final : public Regressor {
public:
    explicit DecisionTreeRegressor(TreeParams params = {}) : params_(params) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    void fit_with_rng(const MatrixXd& X, const VectorXd& y, Rng& rng);
    double predict_one(const VectorXd& x) const override;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    int leaf_count() const;
    double total_leaf_rss() const;
    double root_split_rss() const;  // post-split RSS at the root (root rss if leaf)

    std::string kind() const override { return "tree"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int build_node(const MatrixXd& X, const VectorXd& y, std::vector<int>& idx, int begin,
                   int end, int depth, Rng& rng);
    void prune();

    TreeParams params_;
    std::vector<TreeNode> nodes_;
};

nlohmann::json tree_params_json(const TreeParams& p);
TreeParams tree_params_from_json(const nlohmann::json& j);

}  // namespace gridcast
