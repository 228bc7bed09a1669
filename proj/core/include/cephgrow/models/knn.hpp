#pragma once

#include "cephgrow/models/common.hpp"

namespace cephgrow::models {

// Exhaustive k-nearest-neighbors, Euclidean metric. Distance ties break by
// lower training-row index; vote ties by the shared rule in common.hpp.
class KnnModel final : public TrainedModel {
public:
    KnnModel(ModelSpec spec, TrainMeta meta, Standardizer scaler, Matrix train_x,
             std::vector<GrowthClass> train_y)
        : spec_(std::move(spec)), meta_(meta), scaler_(std::move(scaler)), x_(std::move(train_x)),
          y_(std::move(train_y)), train_counts_(class_counts(y_)) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return x_.cols(); }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    // Indices of the k nearest stored rows for a (raw) query row.
    std::vector<int> neighbors(const Eigen::RowVectorXd& row) const;

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Standardizer scaler_;
    Matrix x_; // standardized training rows
    std::vector<GrowthClass> y_;
    std::array<int, kNumClasses> train_counts_;
};

std::unique_ptr<TrainedModel> train_knn(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config);

} // namespace cephgrow::models
