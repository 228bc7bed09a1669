#pragma once

#include "cephgrow/models/common.hpp"
#include "cephgrow/rng.hpp"

namespace cephgrow::models {

struct CartNode {
    int feature = -1; // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = 0;
    std::array<int, kNumClasses> counts{};
};

struct CartParams {
    int max_depth = -1;        // -1: grow to purity
    int feature_subsample = 0; // 0: consider all features; else random subset per node
};

// CART classification tree, Gini impurity, exact threshold search with
// deterministic tie-breaking (lowest feature index, lowest threshold).
class Cart {
public:
    void fit(const Matrix& x, const std::vector<int>& y, std::vector<int> rows, const CartParams& params,
             Rng* rng);

    int predict_row(const double* row) const;
    const std::vector<CartNode>& nodes() const { return nodes_; }
    static Cart from_nodes(std::vector<CartNode> nodes);

private:
    int build(const Matrix& x, const std::vector<int>& y, std::vector<int>& rows, int begin, int end,
              int depth, const CartParams& params, Rng* rng);

    std::vector<CartNode> nodes_;
};

class DecisionTreeModel final : public TrainedModel {
public:
    DecisionTreeModel(ModelSpec spec, TrainMeta meta, Cart tree, Eigen::Index width,
                      std::array<int, kNumClasses> train_counts)
        : spec_(std::move(spec)), meta_(meta), tree_(std::move(tree)), width_(width),
          train_counts_(train_counts) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return width_; }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    const Cart& tree() const { return tree_; }

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Cart tree_;
    Eigen::Index width_;
    std::array<int, kNumClasses> train_counts_;
};

std::unique_ptr<TrainedModel> train_decision_tree(const ModelSpec& spec, const Matrix& x,
                                                  const std::vector<GrowthClass>& labels,
                                                  const TrainConfig& config);

} // namespace cephgrow::models
