#include "cephgrow/analysis.hpp"

#include "cephgrow/geometry.hpp"
#include "cephgrow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cephgrow::analysis {

DeltaSet growth_deltas(const cephalometrics::CohortMeasurements& measurements,
                       std::string_view target, Stage start, Stage end) {
    const std::size_t mi = measurements.require_measurement_index(target);
    DeltaSet out;
    out.target = std::string(target);
    out.start = start;
    out.end = end;
    for (const auto& [pid, stages] : measurements.by_patient) {
        const auto& a = stages[stage_index(start)];
        const auto& b = stages[stage_index(end)];
        if (!a || !b) {
            out.skipped.push_back(pid);
            continue;
        }
        out.deltas.push_back({pid, (*b)[mi] - (*a)[mi]});
    }
    return out; // map iteration keeps patient_id order
}

const LabeledDelta* LabelSet::find(std::string_view patient_id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), patient_id,
                               [](const LabeledDelta& e, std::string_view id) { return e.patient_id < id; });
    if (it == entries.end() || it->patient_id != patient_id) return nullptr;
    return &*it;
}

LabelSet label(const DeltaSet& deltas) {
    if (deltas.deltas.size() < 2) throw std::invalid_argument("label: need at least two deltas");

    std::vector<double> values;
    values.reserve(deltas.deltas.size());
    for (const auto& d : deltas.deltas) values.push_back(d.value);

    LabelSet out;
    out.target = deltas.target;
    out.start = deltas.start;
    out.end = deltas.end;
    out.stats.target = deltas.target;
    out.stats.mean = stats::mean(values);
    out.stats.std_dev = stats::sample_std(values);
    out.stats.degenerate_std = out.stats.std_dev == 0.0;

    const double lo = out.stats.mean - out.stats.std_dev;
    const double hi = out.stats.mean + out.stats.std_dev;
    out.entries.reserve(deltas.deltas.size());
    for (const auto& d : deltas.deltas) {
        GrowthClass cls = GrowthClass::Mixed;
        if (!out.stats.degenerate_std) {
            if (d.value < lo) cls = GrowthClass::Horizontal;
            else if (d.value > hi) cls = GrowthClass::Vertical;
        }
        ++out.stats.counts[static_cast<std::size_t>(cls)];
        out.entries.push_back({d.patient_id, d.value, cls});
    }
    return out;
}

LabelSet balanced_relabel(const LabelSet& labels) {
    const std::size_t n = labels.entries.size();
    if (n < 3) throw std::invalid_argument("balanced_relabel: need at least three instances");

    // Counts land on floor(n/3) or ceil(n/3): one leftover stays Mixed, two
    // leftovers pad the extreme classes.
    const std::size_t base = n / 3;
    const std::size_t extreme_target = n % 3 == 2 ? base + 1 : base;
    const auto count = [&](GrowthClass c) {
        return static_cast<std::size_t>(labels.stats.counts[static_cast<std::size_t>(c)]);
    };
    if (count(GrowthClass::Horizontal) > extreme_target || count(GrowthClass::Vertical) > extreme_target)
        throw std::invalid_argument("balanced_relabel: an extreme class already exceeds n/3");

    // Indices of Mixed entries ordered by (value, patient_id).
    std::vector<std::size_t> mixed;
    for (std::size_t i = 0; i < n; ++i)
        if (labels.entries[i].cls == GrowthClass::Mixed) mixed.push_back(i);
    std::sort(mixed.begin(), mixed.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = labels.entries[a];
        const auto& eb = labels.entries[b];
        if (ea.value != eb.value) return ea.value < eb.value;
        return ea.patient_id < eb.patient_id;
    });

    const std::size_t need_h = extreme_target - count(GrowthClass::Horizontal);
    const std::size_t need_v = extreme_target - count(GrowthClass::Vertical);

    LabelSet out = labels;
    for (std::size_t k = 0; k < need_h; ++k) out.entries[mixed[k]].cls = GrowthClass::Horizontal;
    for (std::size_t k = 0; k < need_v; ++k)
        out.entries[mixed[mixed.size() - 1 - k]].cls = GrowthClass::Vertical;

    out.stats.counts = {extreme_target, n - 2 * extreme_target, extreme_target};
    return out;
}

CorrelationMatrix period_correlations(const cephalometrics::CohortMeasurements& measurements,
                                      std::string_view target) {
    const std::size_t mi = measurements.require_measurement_index(target);

    // Adjacent deltas are the primitives; composite periods sum them
    // left-to-right so the telescoping identity is exact.
    std::vector<std::array<double, 6>> period_deltas;
    for (const auto& [pid, stages] : measurements.by_patient) {
        bool complete = true;
        for (Stage st : kAllStages)
            if (!stages[stage_index(st)]) complete = false;
        if (!complete) continue;
        const double m9 = (*stages[0])[mi];
        const double m12 = (*stages[1])[mi];
        const double m15 = (*stages[2])[mi];
        const double m18 = (*stages[3])[mi];
        const double d1 = m12 - m9;
        const double d2 = m15 - m12;
        const double d3 = m18 - m15;
        period_deltas.push_back({d1, d2, d3, d1 + d2, d2 + d3, d1 + d2 + d3});
    }
    if (period_deltas.size() < 3)
        throw std::invalid_argument("period_correlations: need at least three patients with all four stages");

    CorrelationMatrix out;
    out.target = std::string(target);
    out.n_patients = period_deltas.size();

    std::array<std::vector<double>, 6> cols;
    for (auto& c : cols) c.reserve(period_deltas.size());
    for (const auto& row : period_deltas)
        for (std::size_t p = 0; p < 6; ++p) cols[p].push_back(row[p]);

    for (std::size_t p = 0; p < 6; ++p) {
        const double m = stats::mean(cols[p]);
        double ss = 0.0;
        for (double v : cols[p]) ss += (v - m) * (v - m);
        out.zero_variance[p] = ss == 0.0;
    }

    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i == j) {
                out.r[i][j] = 1.0;
                out.defined[i][j] = true;
                continue;
            }
            if (out.zero_variance[i] || out.zero_variance[j]) {
                out.r[i][j] = std::numeric_limits<double>::quiet_NaN();
                out.defined[i][j] = false;
                continue;
            }
            if (j < i) { // symmetry by construction
                out.r[i][j] = out.r[j][i];
                out.defined[i][j] = out.defined[j][i];
                continue;
            }
            out.r[i][j] = stats::pearson(cols[i], cols[j]);
            out.defined[i][j] = true;
        }
    }
    return out;
}

std::string GroupFilter::describe() const {
    std::string s;
    for (const auto& [target, cls] : required) {
        if (!s.empty()) s += ", ";
        s += target + "=" + std::string(growth_class_name(cls));
    }
    return s.empty() ? std::string("<empty filter>") : s;
}

TrajectorySet mean_trajectories(const Cohort& cohort, const std::vector<LabelSet>& labels,
                                const GroupFilter& filter) {
    const auto label_for = [&](std::string_view target, std::string_view pid) -> const LabeledDelta* {
        for (const auto& ls : labels)
            if (ls.target == target) return ls.find(pid);
        return nullptr;
    };

    TrajectorySet out;
    out.landmark_names = cohort.schema.names();
    constexpr std::array<Stage, 3> kStages{Stage::S9, Stage::S12, Stage::S18};
    for (auto& v : out.mean_points) v.assign(cohort.schema.size(), Point2{});

    for (const auto& series : cohort.series) {
        bool pass = true;
        for (const auto& [target, cls] : filter.required) {
            const LabeledDelta* e = label_for(target, series.patient_id);
            if (!e || e->cls != cls) {
                pass = false;
                break;
            }
        }
        if (!pass) continue;
        bool has_stages = true;
        for (Stage st : kStages)
            if (!series.has(st)) has_stages = false;
        if (!has_stages) continue;

        for (std::size_t si = 0; si < kStages.size(); ++si) {
            const auto frame = geometry::transform_to_sn_frame(series.at(kStages[si]), cohort.schema);
            for (std::size_t i = 0; i < frame.points.size(); ++i) {
                out.mean_points[si][i].x += frame.points[i].x;
                out.mean_points[si][i].y += frame.points[i].y;
            }
        }
        out.patient_ids.push_back(series.patient_id);
    }

    if (out.patient_ids.empty())
        throw std::invalid_argument("mean_trajectories: empty group for filter " + filter.describe());

    const double inv = 1.0 / static_cast<double>(out.patient_ids.size());
    for (auto& stage_points : out.mean_points)
        for (auto& p : stage_points) {
            p.x *= inv;
            p.y *= inv;
        }
    return out;
}

} // namespace cephgrow::analysis
