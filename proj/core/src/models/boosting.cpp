#include "cephgrow/models/boosting.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cephgrow::models {

namespace {

constexpr double kEta = 0.3;
constexpr double kLambda = 1.0;
constexpr double kGainFloor = 1e-12;
constexpr int kMaxDepth = 6;

struct LevelNode {
    double g_sum = 0.0;
    double h_sum = 0.0;
    int count = 0;
    int node_id = -1;
    // best split found this level
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
};

double leaf_objective(double g, double h) { return g * g / (h + kLambda); }

// One regression tree on (g, h), exact greedy over presorted columns.
BoostTree build_tree(const Matrix& x, const std::vector<std::vector<int>>& sorted_idx,
                     const std::vector<double>& g, const std::vector<double>& h,
                     std::vector<int>& node_of_row) {
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());

    BoostTree tree;
    tree.nodes.emplace_back();
    std::fill(node_of_row.begin(), node_of_row.end(), 0);

    std::vector<int> active{0};
    for (int depth = 0; depth < kMaxDepth && !active.empty(); ++depth) {
        // Per active node totals.
        std::vector<LevelNode> acc(active.size());
        std::vector<int> slot_of_node(tree.nodes.size(), -1);
        for (std::size_t s = 0; s < active.size(); ++s) {
            acc[s].node_id = active[s];
            slot_of_node[static_cast<std::size_t>(active[s])] = static_cast<int>(s);
        }
        for (int i = 0; i < n; ++i) {
            const int slot = slot_of_node[static_cast<std::size_t>(node_of_row[static_cast<std::size_t>(i)])];
            if (slot < 0) continue;
            acc[static_cast<std::size_t>(slot)].g_sum += g[static_cast<std::size_t>(i)];
            acc[static_cast<std::size_t>(slot)].h_sum += h[static_cast<std::size_t>(i)];
            ++acc[static_cast<std::size_t>(slot)].count;
        }

        // Scan features in presorted order, per-slot running prefixes.
        std::vector<double> gl(acc.size()), hl(acc.size()), prev(acc.size());
        std::vector<int> cl(acc.size());
        for (int f = 0; f < d; ++f) {
            std::fill(gl.begin(), gl.end(), 0.0);
            std::fill(hl.begin(), hl.end(), 0.0);
            std::fill(cl.begin(), cl.end(), 0);
            for (const int i : sorted_idx[static_cast<std::size_t>(f)]) {
                const int node = node_of_row[static_cast<std::size_t>(i)];
                const int slot = slot_of_node[static_cast<std::size_t>(node)];
                if (slot < 0) continue;
                auto& a = acc[static_cast<std::size_t>(slot)];
                const double v = x(i, f);
                auto& s_gl = gl[static_cast<std::size_t>(slot)];
                auto& s_hl = hl[static_cast<std::size_t>(slot)];
                auto& s_cl = cl[static_cast<std::size_t>(slot)];
                if (s_cl > 0 && v != prev[static_cast<std::size_t>(slot)] && s_cl < a.count) {
                    const double thr = 0.5 * (prev[static_cast<std::size_t>(slot)] + v);
                    if (thr > prev[static_cast<std::size_t>(slot)]) {
                        const double gain = leaf_objective(s_gl, s_hl) +
                                            leaf_objective(a.g_sum - s_gl, a.h_sum - s_hl) -
                                            leaf_objective(a.g_sum, a.h_sum);
                        if (gain > kGainFloor && gain > a.best_gain) {
                            a.best_gain = gain;
                            a.best_feature = f;
                            a.best_threshold = thr;
                        }
                    }
                }
                s_gl += g[static_cast<std::size_t>(i)];
                s_hl += h[static_cast<std::size_t>(i)];
                ++s_cl;
                prev[static_cast<std::size_t>(slot)] = v;
            }
        }

        // Materialize splits; unsplit actives become leaves.
        std::vector<int> next_active;
        for (auto& a : acc) {
            auto& node = tree.nodes[static_cast<std::size_t>(a.node_id)];
            if (a.best_feature < 0 || a.best_gain <= kGainFloor) {
                node.weight = -kEta * a.g_sum / (a.h_sum + kLambda);
                continue;
            }
            node.feature = a.best_feature;
            node.threshold = a.best_threshold;
            node.left = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            node.right = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            next_active.push_back(node.left);
            next_active.push_back(node.right);
        }
        // Reassign rows of split nodes.
        for (int i = 0; i < n; ++i) {
            const int node = node_of_row[static_cast<std::size_t>(i)];
            const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
            if (nd.feature < 0) continue;
            node_of_row[static_cast<std::size_t>(i)] =
                x(i, nd.feature) < nd.threshold ? nd.left : nd.right;
        }
        active = std::move(next_active);
    }
    // Depth cap: any still-active node becomes a leaf.
    for (int id : active) {
        double gs = 0.0, hs = 0.0;
        for (int i = 0; i < n; ++i)
            if (node_of_row[static_cast<std::size_t>(i)] == id) {
                gs += g[static_cast<std::size_t>(i)];
                hs += h[static_cast<std::size_t>(i)];
            }
        tree.nodes[static_cast<std::size_t>(id)].weight = -kEta * gs / (hs + kLambda);
    }
    return tree;
}

} // namespace

double BoostTree::value(const double* row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(i)];
        i = row[nd.feature] < nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(i)].weight;
}

std::unique_ptr<TrainedModel> train_xgb(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config) {
    validate_training_inputs(x, labels);
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());

    std::vector<int> y;
    y.reserve(labels.size());
    for (auto c : labels) y.push_back(static_cast<int>(c));

    // Presort once; ties keep row order.
    std::vector<std::vector<int>> sorted_idx(static_cast<std::size_t>(d));
    for (int f = 0; f < d; ++f) {
        auto& idx = sorted_idx[static_cast<std::size_t>(f)];
        idx.resize(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
    }

    Matrix margin = Matrix::Zero(n, kNumClasses);
    std::vector<double> g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
    std::vector<int> node_of_row(static_cast<std::size_t>(n));

    std::vector<BoostTree> trees;
    trees.reserve(static_cast<std::size_t>(spec.rounds) * kNumClasses);
    for (int round = 0; round < spec.rounds; ++round) {
        // Softmax probabilities from current margins.
        Matrix p = margin;
        for (int i = 0; i < n; ++i) {
            const double m = p.row(i).maxCoeff();
            p.row(i) = (p.row(i).array() - m).exp();
            p.row(i) /= p.row(i).sum();
        }
        for (int c = 0; c < kNumClasses; ++c) {
            for (int i = 0; i < n; ++i) {
                const double pc = p(i, c);
                g[static_cast<std::size_t>(i)] = pc - (y[static_cast<std::size_t>(i)] == c ? 1.0 : 0.0);
                h[static_cast<std::size_t>(i)] = pc * (1.0 - pc);
            }
            BoostTree tree = build_tree(x, sorted_idx, g, h, node_of_row);
            // node_of_row now holds each row's leaf.
            for (int i = 0; i < n; ++i)
                margin(i, c) += tree.nodes[static_cast<std::size_t>(node_of_row[static_cast<std::size_t>(i)])].weight;
            trees.push_back(std::move(tree));
        }
    }

    TrainMeta meta;
    meta.seed = config.seed;
    meta.epochs_run = spec.rounds;
    return std::make_unique<XgbModel>(spec, meta, std::move(trees), x.cols(), class_counts(labels));
}

Matrix XgbModel::margins(const Matrix& rows) const {
    check_width(rows);
    Matrix m = Matrix::Zero(rows.rows(), kNumClasses);
    Eigen::RowVectorXd buf(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        buf = rows.row(r);
        for (std::size_t t = 0; t < trees_.size(); ++t)
            m(r, static_cast<Eigen::Index>(t % kNumClasses)) += trees_[t].value(buf.data());
    }
    return m;
}

std::vector<GrowthClass> XgbModel::predict(const Matrix& rows) const {
    const Matrix m = margins(rows);
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Eigen::Index best = 0;
        m.row(r).maxCoeff(&best);
        out.push_back(static_cast<GrowthClass>(best));
    }
    return out;
}

std::string XgbModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["width"] = width_;
    j["train_counts"] = train_counts_;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : t.nodes)
            nodes.push_back({{"f", nd.feature},
                             {"t", nd.threshold},
                             {"l", nd.left},
                             {"r", nd.right},
                             {"w", nd.weight}});
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    return j.dump();
}

} // namespace cephgrow::models
