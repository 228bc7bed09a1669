#pragma once

#include "cephgrow/models/common.hpp"

namespace cephgrow::models {

// One binary machine of the one-vs-one ensemble; rows index the stored
// support matrix.
struct BinarySvm {
    int class_pos = 0; // votes for this class when the decision is positive
    int class_neg = 0;
    std::vector<int> support_rows;
    std::vector<double> coef; // alpha_i * y_i per support row
    double rho = 0.0;
    bool converged = true;
};

// RBF-kernel C-SVM (C = 1, gamma = 1/(d * var(X))), SMO dual solver with
// tolerance 1e-3, one-vs-one voting.
class SvmModel final : public TrainedModel {
public:
    SvmModel(ModelSpec spec, TrainMeta meta, Standardizer scaler, Matrix support, double gamma,
             std::vector<BinarySvm> machines, std::array<int, kNumClasses> train_counts)
        : spec_(std::move(spec)), meta_(meta), scaler_(std::move(scaler)), support_(std::move(support)),
          gamma_(gamma), machines_(std::move(machines)), train_counts_(train_counts) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return support_.cols(); }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    double gamma() const { return gamma_; }
    const std::vector<BinarySvm>& machines() const { return machines_; }

    // Decision value of one pairwise machine on a (raw) row.
    double decision(std::size_t machine, const Eigen::RowVectorXd& row) const;

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Standardizer scaler_;
    Matrix support_; // standardized training rows referenced by the machines
    double gamma_ = 0.0;
    std::vector<BinarySvm> machines_;
    std::array<int, kNumClasses> train_counts_;
};

std::unique_ptr<TrainedModel> train_svm(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config);

} // namespace cephgrow::models
