#pragma once

#include "cephgrow/cephalometrics.hpp"
#include "cephgrow/types.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace cephgrow::analysis {

struct GrowthDelta {
    std::string patient_id;
    double value = 0.0; // measurement(end) - measurement(start)
};

struct DeltaSet {
    std::string target;
    Stage start = Stage::S9;
    Stage end = Stage::S18;
    std::vector<GrowthDelta> deltas;   // sorted by patient_id
    std::vector<std::string> skipped;  // patients missing a required stage
};

DeltaSet growth_deltas(const cephalometrics::CohortMeasurements& measurements,
                       std::string_view target, Stage start, Stage end);

struct LabelingStats {
    std::string target;
    double mean = 0.0;
    double std_dev = 0.0; // sample convention
    std::array<std::size_t, 3> counts{}; // Horizontal, Mixed, Vertical
    bool degenerate_std = false;         // std == 0: everything Mixed
};

struct LabeledDelta {
    std::string patient_id;
    double value = 0.0;
    GrowthClass cls = GrowthClass::Mixed;
};

struct LabelSet {
    std::string target;
    Stage start = Stage::S9;
    Stage end = Stage::S18;
    std::vector<LabeledDelta> entries; // sorted by patient_id
    LabelingStats stats;

    const LabeledDelta* find(std::string_view patient_id) const;
};

// +/- 1 sigma three-class labeling over the full delta collection. Values on
// the boundary stay Mixed ("not further than one standard deviation").
LabelSet label(const DeltaSet& deltas);

// Re-tags Mixed instances so each class holds floor(n/3) or ceil(n/3)
// members: lowest-valued Mixed go Horizontal, highest-valued go Vertical.
LabelSet balanced_relabel(const LabelSet& labels);

inline constexpr std::array<std::pair<Stage, Stage>, 6> kGrowthPeriods{{
    {Stage::S9, Stage::S12},
    {Stage::S12, Stage::S15},
    {Stage::S15, Stage::S18},
    {Stage::S9, Stage::S15},
    {Stage::S12, Stage::S18},
    {Stage::S9, Stage::S18},
}};

struct CorrelationMatrix {
    std::string target;
    std::size_t n_patients = 0; // patients with all four stages
    std::array<std::array<double, 6>, 6> r{};
    std::array<std::array<bool, 6>, 6> defined{};
    std::array<bool, 6> zero_variance{}; // per period
};

// Pearson correlations between per-period growth deltas over the six
// periods. Composite periods are ordered sums of the adjacent deltas, so
// delta(9-18) == delta(9-12)+delta(12-15)+delta(15-18) exactly.
CorrelationMatrix period_correlations(const cephalometrics::CohortMeasurements& measurements,
                                      std::string_view target);

struct GroupFilter {
    std::map<std::string, GrowthClass> required; // target name -> class
    std::string describe() const;
};

struct TrajectorySet {
    std::vector<std::string> landmark_names;
    // Mean SN-frame position per landmark at stages 9, 12, 18.
    std::array<std::vector<Point2>, 3> mean_points;
    std::vector<std::string> patient_ids; // group members
};

TrajectorySet mean_trajectories(const Cohort& cohort, const std::vector<LabelSet>& labels,
                                const GroupFilter& filter);

} // namespace cephgrow::analysis
