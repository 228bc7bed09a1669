#include "cephgrow/models/knn.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace cephgrow::models {

std::unique_ptr<TrainedModel> train_knn(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config) {
    validate_training_inputs(x, labels);
    if (spec.neighbors < 1 || spec.neighbors > static_cast<int>(labels.size()))
        throw std::invalid_argument("train_knn: k must lie in [1, n]");

    Standardizer scaler;
    if (config.standardize) scaler = Standardizer::fit(x);
    const Matrix xs = scaler.active ? scaler.apply(x) : x;

    TrainMeta meta;
    meta.seed = config.seed;
    return std::make_unique<KnnModel>(spec, meta, std::move(scaler), xs, labels);
}

std::vector<int> KnnModel::neighbors(const Eigen::RowVectorXd& row) const {
    Eigen::RowVectorXd z = row;
    if (scaler_.active) {
        Matrix tmp = scaler_.apply(z);
        z = tmp.row(0);
    }
    std::vector<std::pair<double, int>> dist;
    dist.reserve(static_cast<std::size_t>(x_.rows()));
    for (Eigen::Index r = 0; r < x_.rows(); ++r)
        dist.emplace_back((x_.row(r) - z).squaredNorm(), static_cast<int>(r));
    const auto k = static_cast<std::size_t>(spec_.neighbors);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<int> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
    return out;
}

std::vector<GrowthClass> KnnModel::predict(const Matrix& rows) const {
    check_width(rows);
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        const std::vector<int> nn = neighbors(rows.row(r));
        std::array<int, kNumClasses> votes{};
        for (int idx : nn) ++votes[static_cast<int>(y_[static_cast<std::size_t>(idx)])];
        out.push_back(static_cast<GrowthClass>(resolve_vote(votes, train_counts_)));
    }
    return out;
}

std::string KnnModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    if (scaler_.active) {
        j["scaler"]["mean"] = std::vector<double>(scaler_.mean.data(), scaler_.mean.data() + scaler_.mean.size());
        j["scaler"]["scale"] =
            std::vector<double>(scaler_.scale.data(), scaler_.scale.data() + scaler_.scale.size());
    }
    j["cols"] = x_.cols();
    std::vector<double> flat(x_.data(), x_.data() + x_.size());
    j["x"] = flat;
    std::vector<int> yv;
    for (auto c : y_) yv.push_back(static_cast<int>(c));
    j["y"] = yv;
    return j.dump();
}

} // namespace cephgrow::models
