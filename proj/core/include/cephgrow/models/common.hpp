#pragma once

#include "cephgrow/types.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cephgrow::models {

inline constexpr int kNumClasses = 3;

using Matrix = Eigen::MatrixXd;

struct ModelSpec {
    enum class Family { Mlp, Xgb, RandomForest, Svm, LogisticRegression, DecisionTree, Knn, ZeroRule };

    Family family = Family::ZeroRule;
    std::vector<int> hidden_layers; // MLP
    int rounds = 0;                 // XGB
    int trees = 0;                  // RF
    int neighbors = 0;              // NN(k)

    std::string name() const;
    static ModelSpec parse(std::string_view name);

    // The 16 canonical instances, in publication order.
    static const std::vector<ModelSpec>& canonical_zoo();

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct TrainConfig {
    std::uint64_t seed = 0;
    double validation_fraction = 0.2; // of the training rows, stratified
    int patience = 50;                // epochs without validation improvement
    int max_epochs = 10000;
    int lr_max_iterations = 2000;
    bool standardize = true; // z-score features for MLP, LR, SVM, NN
};

struct TrainMeta {
    std::uint64_t seed = 0;
    int epochs_run = 0;
    bool stopped_early = false;
    bool converged = true; // SVM/LR optimizer status
};

// Z-score scaler fitted on training rows only; zero-variance columns pass
// through unscaled.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;
    bool active = false;

    static Standardizer fit(const Matrix& x);
    Matrix apply(const Matrix& x) const;
};

class TrainedModel {
public:
    virtual ~TrainedModel() = default;
    virtual const ModelSpec& spec() const = 0;
    virtual const TrainMeta& meta() const = 0;
    virtual std::vector<GrowthClass> predict(const Matrix& rows) const = 0;
    virtual Eigen::Index input_width() const = 0;

    // Versioned JSON dump; see zoo.hpp for the loader.
    virtual std::string serialize() const = 0;

    GrowthClass predict_one(const Eigen::RowVectorXd& row) const;

protected:
    void check_width(const Matrix& rows) const;
};

// Trains one model family on (x, labels). Throws std::invalid_argument on
// single-class data, non-finite features, or width inconsistencies.
std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const Matrix& x,
                                    const std::vector<GrowthClass>& labels, const TrainConfig& config);

// Vote tie rule used by every voting family: most votes, then the class with
// more training instances, then class order.
int resolve_vote(const std::array<int, kNumClasses>& votes,
                 const std::array<int, kNumClasses>& train_counts);

std::array<int, kNumClasses> class_counts(const std::vector<GrowthClass>& labels);

void validate_training_inputs(const Matrix& x, const std::vector<GrowthClass>& labels);

} // namespace cephgrow::models
