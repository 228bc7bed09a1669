#include "cephgrow/models/forest.hpp"

#include "json.hpp"

#include <cmath>

namespace cephgrow::models {

namespace detail {
nlohmann::json cart_to_json(const Cart& tree); // tree.cpp
}

std::unique_ptr<TrainedModel> train_random_forest(const ModelSpec& spec, const Matrix& x,
                                                  const std::vector<GrowthClass>& labels,
                                                  const TrainConfig& config) {
    validate_training_inputs(x, labels);
    std::vector<int> y;
    y.reserve(labels.size());
    for (auto c : labels) y.push_back(static_cast<int>(c));

    const std::size_t n = labels.size();
    CartParams params;
    params.feature_subsample = std::max(1, static_cast<int>(std::sqrt(double(x.cols()))));

    const Rng master(config.seed);
    std::vector<Cart> trees(static_cast<std::size_t>(spec.trees));
    for (std::size_t t = 0; t < trees.size(); ++t) {
        Rng rng = master.child(t);
        std::vector<int> rows(n);
        for (auto& r : rows) r = static_cast<int>(rng.index(n)); // bootstrap
        trees[t].fit(x, y, std::move(rows), params, &rng);
    }

    TrainMeta meta;
    meta.seed = config.seed;
    return std::make_unique<RandomForestModel>(spec, meta, std::move(trees), x.cols(),
                                               class_counts(labels));
}

std::vector<int> RandomForestModel::tree_votes(const Eigen::RowVectorXd& row) const {
    std::vector<int> votes;
    votes.reserve(trees_.size());
    for (const auto& t : trees_) votes.push_back(t.predict_row(row.data()));
    return votes;
}

std::vector<GrowthClass> RandomForestModel::predict(const Matrix& rows) const {
    check_width(rows);
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    Eigen::RowVectorXd buf(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        buf = rows.row(r);
        std::array<int, kNumClasses> votes{};
        for (const auto& t : trees_) ++votes[t.predict_row(buf.data())];
        out.push_back(static_cast<GrowthClass>(resolve_vote(votes, train_counts_)));
    }
    return out;
}

std::string RandomForestModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["width"] = width_;
    j["train_counts"] = train_counts_;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) trees.push_back(detail::cart_to_json(t));
    j["trees"] = std::move(trees);
    return j.dump();
}

} // namespace cephgrow::models
