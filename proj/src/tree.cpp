#include "gridcast/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace gridcast {

nlohmann::json tree_params_json(const TreeParams& p) {
    return {{"min_samples_leaf", p.min_samples_leaf},
            {"max_depth", p.max_depth},
            {"ccp_alpha", p.ccp_alpha},
            {"split_mode", p.split_mode == SplitMode::exhaustive ? "exhaustive" : "random"},
            {"features_per_split", p.features_per_split},
            {"seed", p.seed}};
}

TreeParams tree_params_from_json(const nlohmann::json& j) {
    TreeParams p;
    p.min_samples_leaf = j.value("min_samples_leaf", 1);
    p.max_depth = j.value("max_depth", -1);
    p.ccp_alpha = j.value("ccp_alpha", 0.0);
    const auto mode = j.value("split_mode", std::string("exhaustive"));
    if (mode == "random")
        p.split_mode = SplitMode::random;
    else if (mode == "exhaustive")
        p.split_mode = SplitMode::exhaustive;
    else
        fail("UnsupportedHyperparam", "split_mode '" + mode + "'");
    p.features_per_split = j.value("features_per_split", -1);
    p.seed = j.value("seed", std::uint64_t{0});
    return p;
}

namespace {

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();  // post-split RSS
    bool valid() const { return feature >= 0; }
    // strict improvement only; scanning features/thresholds in ascending
    // order makes equal-RSS ties resolve to (lower feature, lower threshold)
    void consider(int f, double thr, double s) {
        if (s < score) {
            feature = f;
            threshold = thr;
            score = s;
        }
    }
};

}  // namespace

void DecisionTreeRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    Rng rng(params_.seed);
    fit_with_rng(X, y, rng);
}

void DecisionTreeRegressor::fit_with_rng(const MatrixXd& X, const VectorXd& y, Rng& rng) {
    require_finite(X, y);
    if (X.rows() == 0) fail("EmptySplit", "cannot fit a tree on zero rows");
    if (params_.min_samples_leaf < 1) fail("InvalidArgument", "min_samples_leaf >= 1");
    nodes_.clear();
    std::vector<int> idx(static_cast<std::size_t>(X.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    build_node(X, y, idx, 0, static_cast<int>(idx.size()), 0, rng);
    if (params_.ccp_alpha > 0.0) prune();
    n_features_ = static_cast<int>(X.cols());
}

int DecisionTreeRegressor::build_node(const MatrixXd& X, const VectorXd& y,
                                      std::vector<int>& idx, int begin, int end, int depth,
                                      Rng& rng) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    {
        TreeNode& node = nodes_.back();
        const int n = end - begin;
        double sum = 0.0;
        for (int i = begin; i < end; ++i) sum += y[idx[i]];
        node.n = n;
        node.value = sum / n;
        double rss = 0.0;
        for (int i = begin; i < end; ++i) {
            const double e = y[idx[i]] - node.value;
            rss += e * e;
        }
        node.rss = rss;
    }

    const int n = end - begin;
    const bool depth_ok = params_.max_depth < 0 || depth < params_.max_depth;
    double ymin = y[idx[begin]], ymax = y[idx[begin]];
    for (int i = begin; i < end; ++i) {
        ymin = std::min(ymin, y[idx[i]]);
        ymax = std::max(ymax, y[idx[i]]);
    }
    if (!depth_ok || n < 2 * params_.min_samples_leaf || ymin == ymax) return node_id;

    // feature bagging: sample without replacement, then scan in index order
    const int d = static_cast<int>(X.cols());
    std::vector<int> feats(static_cast<std::size_t>(d));
    std::iota(feats.begin(), feats.end(), 0);
    int fps = params_.features_per_split;
    if (fps <= 0 || fps > d) fps = d;
    if (fps < d) {
        for (int i = 0; i < fps; ++i) {
            const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(d - i)));
            std::swap(feats[i], feats[j]);
        }
        feats.resize(static_cast<std::size_t>(fps));
        std::sort(feats.begin(), feats.end());
    }

    SplitCandidate best;
    const int msl = params_.min_samples_leaf;
    if (params_.split_mode == SplitMode::exhaustive) {
        std::vector<std::pair<double, double>> xy(static_cast<std::size_t>(n));
        for (int f : feats) {
            for (int i = 0; i < n; ++i)
                xy[static_cast<std::size_t>(i)] = {X(idx[begin + i], f), y[idx[begin + i]]};
            std::sort(xy.begin(), xy.end());
            double lsum = 0.0, lsum2 = 0.0;
            double tsum = 0.0, tsum2 = 0.0;
            for (const auto& [xv, yv] : xy) {
                tsum += yv;
                tsum2 += yv * yv;
            }
            for (int i = 0; i < n - 1; ++i) {
                const auto& [xv, yv] = xy[static_cast<std::size_t>(i)];
                lsum += yv;
                lsum2 += yv * yv;
                if (xv == xy[static_cast<std::size_t>(i + 1)].first) continue;
                const int nl = i + 1, nr = n - nl;
                if (nl < msl || nr < msl) continue;
                const double rsum = tsum - lsum, rsum2 = tsum2 - lsum2;
                const double score =
                    (lsum2 - lsum * lsum / nl) + (rsum2 - rsum * rsum / nr);
                best.consider(f, 0.5 * (xv + xy[static_cast<std::size_t>(i + 1)].first),
                              score);
            }
        }
    } else {
        for (int f : feats) {
            double lo = X(idx[begin], f), hi = lo;
            for (int i = begin; i < end; ++i) {
                lo = std::min(lo, X(idx[i], f));
                hi = std::max(hi, X(idx[i], f));
            }
            if (lo == hi) continue;
            const double thr = rng.uniform(lo, hi);
            double lsum = 0.0, lsum2 = 0.0, rsum = 0.0, rsum2 = 0.0;
            int nl = 0;
            for (int i = begin; i < end; ++i) {
                const double yv = y[idx[i]];
                if (X(idx[i], f) <= thr) {
                    lsum += yv;
                    lsum2 += yv * yv;
                    ++nl;
                } else {
                    rsum += yv;
                    rsum2 += yv * yv;
                }
            }
            const int nr = n - nl;
            if (nl < msl || nr < msl) continue;
            const double score = (lsum2 - lsum * lsum / nl) + (rsum2 - rsum * rsum / nr);
            best.consider(f, thr, score);
        }
    }
    if (!best.valid()) return node_id;

    // partition idx[begin,end) around the chosen split, order-stable
    std::vector<int> left, right;
    left.reserve(static_cast<std::size_t>(n));
    for (int i = begin; i < end; ++i)
        (X(idx[i], best.feature) <= best.threshold ? left : right).push_back(idx[i]);
    std::copy(left.begin(), left.end(), idx.begin() + begin);
    std::copy(right.begin(), right.end(), idx.begin() + begin + static_cast<long>(left.size()));
    const int mid = begin + static_cast<int>(left.size());

    const int l = build_node(X, y, idx, begin, mid, depth + 1, rng);
    const int r = build_node(X, y, idx, mid, end, depth + 1, rng);
    nodes_[static_cast<std::size_t>(node_id)].feature = best.feature;
    nodes_[static_cast<std::size_t>(node_id)].threshold = best.threshold;
    nodes_[static_cast<std::size_t>(node_id)].left = l;
    nodes_[static_cast<std::size_t>(node_id)].right = r;
    return node_id;
}

void DecisionTreeRegressor::prune() {
    // weakest-link collapse while the effective alpha stays within budget
    for (;;) {
        // subtree leaf counts and RSS, nodes are stored parent-before-child
        std::vector<int> leaves(nodes_.size());
        std::vector<double> sub_rss(nodes_.size());
        for (auto i = static_cast<long>(nodes_.size()) - 1; i >= 0; --i) {
            const auto& nd = nodes_[static_cast<std::size_t>(i)];
            if (nd.feature < 0) {
                leaves[static_cast<std::size_t>(i)] = 1;
                sub_rss[static_cast<std::size_t>(i)] = nd.rss;
            } else {
                leaves[static_cast<std::size_t>(i)] =
                    leaves[static_cast<std::size_t>(nd.left)] +
                    leaves[static_cast<std::size_t>(nd.right)];
                sub_rss[static_cast<std::size_t>(i)] =
                    sub_rss[static_cast<std::size_t>(nd.left)] +
                    sub_rss[static_cast<std::size_t>(nd.right)];
            }
        }
        int weakest = -1;
        double weakest_g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].feature < 0) continue;
            const double g = (nodes_[i].rss - sub_rss[i]) / (leaves[i] - 1);
            if (g < weakest_g) {
                weakest_g = g;
                weakest = static_cast<int>(i);
            }
        }
        if (weakest < 0 || weakest_g > params_.ccp_alpha) break;
        auto& nd = nodes_[static_cast<std::size_t>(weakest)];
        nd.feature = -1;
        nd.left = nd.right = -1;
    }
}

double DecisionTreeRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& nd = nodes_[static_cast<std::size_t>(i)];
        i = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
}

int DecisionTreeRegressor::leaf_count() const {
    int count = 0;
    std::vector<bool> reachable(nodes_.size(), false);
    if (!nodes_.empty()) reachable[0] = true;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!reachable[i]) continue;
        if (nodes_[i].feature < 0)
            ++count;
        else {
            reachable[static_cast<std::size_t>(nodes_[i].left)] = true;
            reachable[static_cast<std::size_t>(nodes_[i].right)] = true;
        }
    }
    return count;
}

double DecisionTreeRegressor::total_leaf_rss() const {
    double total = 0.0;
    std::vector<bool> reachable(nodes_.size(), false);
    if (!nodes_.empty()) reachable[0] = true;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!reachable[i]) continue;
        if (nodes_[i].feature < 0)
            total += nodes_[i].rss;
        else {
            reachable[static_cast<std::size_t>(nodes_[i].left)] = true;
            reachable[static_cast<std::size_t>(nodes_[i].right)] = true;
        }
    }
    return total;
}

double DecisionTreeRegressor::root_split_rss() const {
    if (nodes_.empty()) fail("NotFitted", "tree has no nodes");
    const auto& root = nodes_[0];
    if (root.feature < 0) return root.rss;
    return nodes_[static_cast<std::size_t>(root.left)].rss +
           nodes_[static_cast<std::size_t>(root.right)].rss;
}

nlohmann::json DecisionTreeRegressor::params_json() const {
    return tree_params_json(params_);
}

nlohmann::json DecisionTreeRegressor::state_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& nd : nodes_)
        arr.push_back({{"f", nd.feature}, {"t", nd.threshold}, {"l", nd.left},
                       {"r", nd.right}, {"v", nd.value}, {"rss", nd.rss}, {"n", nd.n}});
    return {{"nodes", arr}, {"n_features", n_features_}};
}

void DecisionTreeRegressor::load_state(const nlohmann::json& state) {
    nodes_.clear();
    for (const auto& j : state.at("nodes")) {
        TreeNode nd;
        nd.feature = j.at("f").get<int>();
        nd.threshold = j.at("t").get<double>();
        nd.left = j.at("l").get<int>();
        nd.right = j.at("r").get<int>();
        nd.value = j.at("v").get<double>();
        nd.rss = j.at("rss").get<double>();
        nd.n = j.at("n").get<int>();
        nodes_.push_back(nd);
    }
    n_features_ = state.at("n_features").get<int>();
}

}  // namespace gridcast
