#pragma once

#include "cephgrow/models/common.hpp"

namespace cephgrow::models {

struct BoostNode {
    int feature = -1; // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double weight = 0.0; // leaf value, shrinkage already applied
};

struct BoostTree {
    std::vector<BoostNode> nodes;
    double value(const double* row) const;
};

// Gradient-boosted depth-6 regression trees on the softmax objective, one
// tree per class per round. Pinned internals: shrinkage 0.3, leaf L2
// lambda 1, gain floor 1e-12, exact greedy splits.
class XgbModel final : public TrainedModel {
public:
    XgbModel(ModelSpec spec, TrainMeta meta, std::vector<BoostTree> trees, Eigen::Index width,
             std::array<int, kNumClasses> train_counts)
        : spec_(std::move(spec)), meta_(meta), trees_(std::move(trees)), width_(width),
          train_counts_(train_counts) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return width_; }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    // Class margins (summed leaf values) per row.
    Matrix margins(const Matrix& rows) const;

private:
    ModelSpec spec_;
    TrainMeta meta_;
    std::vector<BoostTree> trees_; // round-major, class-minor
    Eigen::Index width_;
    std::array<int, kNumClasses> train_counts_;
};

std::unique_ptr<TrainedModel> train_xgb(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config);

} // namespace cephgrow::models
