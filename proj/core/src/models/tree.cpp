#include "cephgrow/models/tree.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cephgrow::models {

namespace {

int majority_class(const std::array<int, kNumClasses>& counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

// Gini proxy: sum over classes of count^2 / n. Larger is purer; the split
// score is the sum of both children's proxies.
double gini_proxy(const std::array<int, kNumClasses>& counts, int n) {
    double s = 0.0;
    for (int c = 0; c < kNumClasses; ++c) s += double(counts[c]) * double(counts[c]);
    return s / double(n);
}

} // namespace

void Cart::fit(const Matrix& x, const std::vector<int>& y, std::vector<int> rows, const CartParams& params,
               Rng* rng) {
    nodes_.clear();
    if (rows.empty()) throw std::invalid_argument("Cart::fit: empty row set");
    build(x, y, rows, 0, static_cast<int>(rows.size()), 0, params, rng);
}

int Cart::build(const Matrix& x, const std::vector<int>& y, std::vector<int>& rows, int begin, int end,
                int depth, const CartParams& params, Rng* rng) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::array<int, kNumClasses> counts{};
    for (int i = begin; i < end; ++i) ++counts[y[static_cast<std::size_t>(rows[i])]];
    nodes_[node_index].counts = counts;
    nodes_[node_index].leaf_class = majority_class(counts);

    const int n = end - begin;
    const bool pure = counts[nodes_[node_index].leaf_class] == n;
    if (pure || n < 2 || (params.max_depth >= 0 && depth >= params.max_depth)) return node_index;

    // Candidate features: all, or a per-node random subset without
    // replacement (ascending after the draw, for deterministic scan order).
    const int d = static_cast<int>(x.cols());
    std::vector<int> features;
    if (params.feature_subsample <= 0 || params.feature_subsample >= d) {
        features.resize(static_cast<std::size_t>(d));
        std::iota(features.begin(), features.end(), 0);
    } else {
        std::vector<int> all(static_cast<std::size_t>(d));
        std::iota(all.begin(), all.end(), 0);
        for (int i = 0; i < params.feature_subsample; ++i) {
            const auto j = i + static_cast<int>(rng->index(static_cast<std::size_t>(d - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
        }
        features.assign(all.begin(), all.begin() + params.feature_subsample);
        std::sort(features.begin(), features.end());
    }

    const double parent_score = gini_proxy(counts, n);
    double best_score = parent_score;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int f : features) {
        order.clear();
        for (int i = begin; i < end; ++i)
            order.emplace_back(x(rows[i], f), y[static_cast<std::size_t>(rows[i])]);
        std::sort(order.begin(), order.end());
        if (order.front().first == order.back().first) continue; // constant feature

        std::array<int, kNumClasses> left{};
        for (int i = 0; i + 1 < n; ++i) {
            ++left[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second)];
            const double v = order[static_cast<std::size_t>(i)].first;
            const double next = order[static_cast<std::size_t>(i + 1)].first;
            if (v == next) continue;
            const double thr = 0.5 * (v + next);
            if (!(thr > v)) continue; // midpoint collapsed onto v
            std::array<int, kNumClasses> right{};
            for (int c = 0; c < kNumClasses; ++c) right[c] = counts[c] - left[c];
            const double score = (gini_proxy(left, i + 1) * double(i + 1) +
                                  gini_proxy(right, n - i - 1) * double(n - i - 1)) /
                                 double(n);
            if (score > best_score) {
                best_score = score;
                best_feature = f;
                best_threshold = thr;
            }
        }
    }
    if (best_feature < 0) return node_index; // no impurity-reducing split

    const auto mid = std::partition(rows.begin() + begin, rows.begin() + end,
                                    [&](int r) { return x(r, best_feature) < best_threshold; });
    const int split = static_cast<int>(mid - rows.begin());
    if (split == begin || split == end) return node_index; // degenerate partition

    nodes_[node_index].feature = best_feature;
    nodes_[node_index].threshold = best_threshold;
    const int left_child = build(x, y, rows, begin, split, depth + 1, params, rng);
    nodes_[node_index].left = left_child;
    const int right_child = build(x, y, rows, split, end, depth + 1, params, rng);
    nodes_[node_index].right = right_child;
    return node_index;
}

Cart Cart::from_nodes(std::vector<CartNode> nodes) {
    Cart t;
    t.nodes_ = std::move(nodes);
    return t;
}

int Cart::predict_row(const double* row) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& nd = nodes_[static_cast<std::size_t>(i)];
        i = row[nd.feature] < nd.threshold ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(i)].leaf_class;
}

std::unique_ptr<TrainedModel> train_decision_tree(const ModelSpec& spec, const Matrix& x,
                                                  const std::vector<GrowthClass>& labels,
                                                  const TrainConfig& config) {
    validate_training_inputs(x, labels);
    std::vector<int> y;
    y.reserve(labels.size());
    for (auto c : labels) y.push_back(static_cast<int>(c));

    std::vector<int> rows(labels.size());
    std::iota(rows.begin(), rows.end(), 0);

    Cart tree;
    tree.fit(x, y, std::move(rows), CartParams{}, nullptr);

    TrainMeta meta;
    meta.seed = config.seed;
    return std::make_unique<DecisionTreeModel>(spec, meta, std::move(tree), x.cols(), class_counts(labels));
}

std::vector<GrowthClass> DecisionTreeModel::predict(const Matrix& rows) const {
    check_width(rows);
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    Eigen::RowVectorXd buf(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        buf = rows.row(r);
        out.push_back(static_cast<GrowthClass>(tree_.predict_row(buf.data())));
    }
    return out;
}

namespace detail {

nlohmann::json cart_to_json(const Cart& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : tree.nodes()) {
        nodes.push_back({{"f", nd.feature},
                         {"t", nd.threshold},
                         {"l", nd.left},
                         {"r", nd.right},
                         {"c", nd.leaf_class}});
    }
    return nodes;
}

} // namespace detail

std::string DecisionTreeModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["width"] = width_;
    j["train_counts"] = train_counts_;
    j["nodes"] = detail::cart_to_json(tree_);
    return j.dump();
}

} // namespace cephgrow::models
