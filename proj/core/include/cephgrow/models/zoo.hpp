#pragma once

#include "cephgrow/models/common.hpp"

namespace cephgrow::models {

// Majority-class baseline used by self-consistency tests (Zero Rule). Not a
// member of the canonical 16.
class ZeroRuleModel final : public TrainedModel {
public:
    ZeroRuleModel(ModelSpec spec, TrainMeta meta, Eigen::Index width, GrowthClass majority)
        : spec_(std::move(spec)), meta_(meta), width_(width), majority_(majority) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return width_; }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Eigen::Index width_;
    GrowthClass majority_;
};

// Rebuilds a model from TrainedModel::serialize() output.
std::unique_ptr<TrainedModel> deserialize(const std::string& blob);

} // namespace cephgrow::models
