#pragma once

#include "cephgrow/models/common.hpp"

namespace cephgrow::models {

// Multinomial softmax regression with L2 penalty (inverse strength C = 1,
// intercept unpenalized), minimized by L-BFGS with an iteration cap.
class LogisticModel final : public TrainedModel {
public:
    LogisticModel(ModelSpec spec, TrainMeta meta, Standardizer scaler, Matrix weights,
                  Eigen::VectorXd bias)
        : spec_(std::move(spec)), meta_(meta), scaler_(std::move(scaler)), weights_(std::move(weights)),
          bias_(std::move(bias)) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return weights_.rows(); }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    const Matrix& weights() const { return weights_; }
    const Eigen::VectorXd& bias() const { return bias_; }

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Standardizer scaler_;
    Matrix weights_; // d x classes
    Eigen::VectorXd bias_;
};

std::unique_ptr<TrainedModel> train_logistic(const ModelSpec& spec, const Matrix& x,
                                             const std::vector<GrowthClass>& labels,
                                             const TrainConfig& config);

} // namespace cephgrow::models
