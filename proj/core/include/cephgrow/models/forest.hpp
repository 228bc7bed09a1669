#pragma once

#include "cephgrow/models/tree.hpp"

namespace cephgrow::models {

// Bootstrap bag of CART trees, sqrt(d) random features per split, majority
// vote over trees.
class RandomForestModel final : public TrainedModel {
public:
    RandomForestModel(ModelSpec spec, TrainMeta meta, std::vector<Cart> trees, Eigen::Index width,
                      std::array<int, kNumClasses> train_counts)
        : spec_(std::move(spec)), meta_(meta), trees_(std::move(trees)), width_(width),
          train_counts_(train_counts) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return width_; }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    // Per-tree class votes for one row, for vote-recomputation checks.
    std::vector<int> tree_votes(const Eigen::RowVectorXd& row) const;
    const std::array<int, kNumClasses>& train_counts() const { return train_counts_; }
    std::size_t tree_count() const { return trees_.size(); }

private:
    ModelSpec spec_;
    TrainMeta meta_;
    std::vector<Cart> trees_;
    Eigen::Index width_;
    std::array<int, kNumClasses> train_counts_;
};

std::unique_ptr<TrainedModel> train_random_forest(const ModelSpec& spec, const Matrix& x,
                                                  const std::vector<GrowthClass>& labels,
                                                  const TrainConfig& config);

} // namespace cephgrow::models
