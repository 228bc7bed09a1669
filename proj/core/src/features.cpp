#include "cephgrow/features.hpp"

#include "cephgrow/io.hpp"

#include <ostream>
#include <stdexcept>

namespace cephgrow::features {

std::string_view data_type_token(DataType t) {
    switch (t) {
        case DataType::Ceph: return "ceph";
        case DataType::Proc: return "proc";
        case DataType::Trans: return "trans";
    }
    throw std::logic_error("data_type_token: bad value");
}

std::string_view period_variant_token(PeriodVariant v) {
    switch (v) {
        case PeriodVariant::At9: return "9";
        case PeriodVariant::At12: return "12";
        case PeriodVariant::Diff: return "12-9";
        case PeriodVariant::Both: return "9,12";
        case PeriodVariant::BaseAndDiff: return "9,12-9";
    }
    throw std::logic_error("period_variant_token: bad value");
}

std::string period_variant_file_token(PeriodVariant v) {
    switch (v) {
        case PeriodVariant::At9: return "9";
        case PeriodVariant::At12: return "12";
        case PeriodVariant::Diff: return "12m9";
        case PeriodVariant::Both: return "9and12";
        case PeriodVariant::BaseAndDiff: return "9and12m9";
    }
    throw std::logic_error("period_variant_file_token: bad value");
}

std::string Scenario::id() const {
    return std::string(data_type_token(data_type)) + "_" + period_variant_file_token(variant) + "_" + target;
}

std::string Scenario::describe() const {
    return std::string(data_type_token(data_type)) + " / " + std::string(period_variant_token(variant)) +
           " / " + target + "(18-9)";
}

std::vector<Scenario> enumerate_scenarios() {
    std::vector<Scenario> out;
    out.reserve(45);
    for (DataType dt : {DataType::Ceph, DataType::Proc, DataType::Trans})
        for (PeriodVariant v : {PeriodVariant::At9, PeriodVariant::At12, PeriodVariant::Diff,
                                PeriodVariant::Both, PeriodVariant::BaseAndDiff})
            for (const auto& target : target_names()) out.push_back({dt, v, target});
    return out;
}

const std::vector<double>* CoordinateSet::find(const std::string& patient_id, Stage stage) const {
    auto it = by_patient.find(patient_id);
    if (it == by_patient.end()) return nullptr;
    const auto& slot = it->second[stage_index(stage)];
    return slot ? &*slot : nullptr;
}

namespace {

std::vector<double> flatten(const std::vector<Point2>& pts) {
    std::vector<double> flat;
    flat.reserve(pts.size() * 2);
    for (const auto& p : pts) {
        flat.push_back(p.x);
        flat.push_back(p.y);
    }
    return flat;
}

} // namespace

CoordinateSet procrustes_coordinates(const LandmarkSchema& schema, const geometry::GpaResult& gpa) {
    CoordinateSet set;
    set.landmark_names = schema.names();
    for (const auto& shape : gpa.aligned)
        set.by_patient[shape.patient_id][stage_index(shape.stage)] = flatten(shape.points);
    return set;
}

CoordinateSet transformed_coordinates(const Cohort& cohort) {
    CoordinateSet set;
    set.landmark_names = cohort.schema.names();
    for (const auto& series : cohort.series)
        for (Stage st : kAllStages) {
            if (!series.has(st)) continue;
            const auto frame = geometry::transform_to_sn_frame(series.at(st), cohort.schema);
            set.by_patient[series.patient_id][stage_index(st)] = flatten(frame.points);
        }
    return set;
}

std::size_t expected_width(const Scenario& scenario, std::size_t panel_size, std::size_t n_landmarks) {
    const std::size_t base = scenario.data_type == DataType::Ceph ? panel_size : 2 * n_landmarks;
    switch (scenario.variant) {
        case PeriodVariant::At9:
        case PeriodVariant::At12: return base + 1;
        case PeriodVariant::Diff: return base + 2;
        case PeriodVariant::Both:
        case PeriodVariant::BaseAndDiff: return 2 * base + 2;
    }
    throw std::logic_error("expected_width: bad variant");
}

namespace {

struct BaseBlock {
    std::vector<std::string> names; // without stage suffix
    // Returns nullptr when the patient lacks the stage.
    const std::vector<double>* (*lookup)(const FeatureInputs&, const std::string&, Stage);
};

const std::vector<double>* lookup_ceph(const FeatureInputs& in, const std::string& pid, Stage st) {
    return in.measurements->find(pid, st);
}
const std::vector<double>* lookup_proc(const FeatureInputs& in, const std::string& pid, Stage st) {
    return in.procrustes->find(pid, st);
}
const std::vector<double>* lookup_trans(const FeatureInputs& in, const std::string& pid, Stage st) {
    return in.transformed->find(pid, st);
}

std::vector<std::string> coordinate_names(const CoordinateSet& set, std::string_view prefix) {
    std::vector<std::string> names;
    names.reserve(set.landmark_names.size() * 2);
    for (const auto& lm : set.landmark_names) {
        names.push_back(std::string(prefix) + ":" + lm + ".x");
        names.push_back(std::string(prefix) + ":" + lm + ".y");
    }
    return names;
}

} // namespace

FeatureTable assemble(const FeatureInputs& inputs, const Scenario& scenario) {
    if (!inputs.cohort || !inputs.measurements || !inputs.labels)
        throw std::invalid_argument("assemble: cohort, measurements and labels are required inputs");
    if (scenario.data_type == DataType::Proc && !inputs.procrustes)
        throw std::invalid_argument("assemble: scenario needs Procrustes coordinates");
    if (scenario.data_type == DataType::Trans && !inputs.transformed)
        throw std::invalid_argument("assemble: scenario needs transformed coordinates");

    BaseBlock block;
    switch (scenario.data_type) {
        case DataType::Ceph:
            block = {inputs.measurements->names, &lookup_ceph};
            break;
        case DataType::Proc:
            block = {coordinate_names(*inputs.procrustes, "proc"), &lookup_proc};
            break;
        case DataType::Trans:
            block = {coordinate_names(*inputs.transformed, "trans"), &lookup_trans};
            break;
    }
    const std::size_t base_width = block.names.size();

    const analysis::LabelSet* label_set = nullptr;
    for (const auto& ls : *inputs.labels)
        if (ls.target == scenario.target) label_set = &ls;
    if (!label_set) throw std::invalid_argument("assemble: no label set for target " + scenario.target);

    FeatureTable table;
    table.scenario = scenario;

    const auto add_stage_names = [&](Stage st) {
        for (const auto& n : block.names)
            table.feature_names.push_back(n + "@" + std::string(stage_token(st)));
    };
    const auto add_diff_names = [&] {
        for (const auto& n : block.names) table.feature_names.push_back("d(" + n + ")12-9");
    };
    switch (scenario.variant) {
        case PeriodVariant::At9:
            add_stage_names(Stage::S9);
            table.feature_names.push_back("age@9");
            break;
        case PeriodVariant::At12:
            add_stage_names(Stage::S12);
            table.feature_names.push_back("age@12");
            break;
        case PeriodVariant::Diff:
            add_diff_names();
            table.feature_names.push_back("age@9");
            table.feature_names.push_back("age@12");
            break;
        case PeriodVariant::Both:
            add_stage_names(Stage::S9);
            add_stage_names(Stage::S12);
            table.feature_names.push_back("age@9");
            table.feature_names.push_back("age@12");
            break;
        case PeriodVariant::BaseAndDiff:
            add_stage_names(Stage::S9);
            add_diff_names();
            table.feature_names.push_back("age@9");
            table.feature_names.push_back("age@12");
            break;
    }
    const std::size_t width = table.feature_names.size();

    // Row assembly; label-set iteration keeps rows sorted by patient_id.
    std::vector<std::vector<double>> rows;
    for (const auto& entry : label_set->entries) {
        const std::string& pid = entry.patient_id;
        const std::vector<double>* at9 = block.lookup(inputs, pid, Stage::S9);
        const std::vector<double>* at12 = block.lookup(inputs, pid, Stage::S12);
        const PatientSeries* series = inputs.cohort->find(pid);
        const bool needs9 = scenario.variant != PeriodVariant::At12;
        const bool needs12 = scenario.variant != PeriodVariant::At9;
        if (!series || (needs9 && (!at9 || !series->has(Stage::S9))) ||
            (needs12 && (!at12 || !series->has(Stage::S12)))) {
            table.skipped.push_back(pid + ": missing stage data");
            continue;
        }

        std::vector<double> row;
        row.reserve(width);
        switch (scenario.variant) {
            case PeriodVariant::At9:
                row.insert(row.end(), at9->begin(), at9->end());
                row.push_back(series->at(Stage::S9).age_years);
                break;
            case PeriodVariant::At12:
                row.insert(row.end(), at12->begin(), at12->end());
                row.push_back(series->at(Stage::S12).age_years);
                break;
            case PeriodVariant::Diff:
                for (std::size_t i = 0; i < base_width; ++i) row.push_back((*at12)[i] - (*at9)[i]);
                row.push_back(series->at(Stage::S9).age_years);
                row.push_back(series->at(Stage::S12).age_years);
                break;
            case PeriodVariant::Both:
                row.insert(row.end(), at9->begin(), at9->end());
                row.insert(row.end(), at12->begin(), at12->end());
                row.push_back(series->at(Stage::S9).age_years);
                row.push_back(series->at(Stage::S12).age_years);
                break;
            case PeriodVariant::BaseAndDiff:
                row.insert(row.end(), at9->begin(), at9->end());
                for (std::size_t i = 0; i < base_width; ++i) row.push_back((*at12)[i] - (*at9)[i]);
                row.push_back(series->at(Stage::S9).age_years);
                row.push_back(series->at(Stage::S12).age_years);
                break;
        }
        rows.push_back(std::move(row));
        table.patient_ids.push_back(pid);
        table.labels.push_back(entry.cls);
    }

    table.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            table.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

void write_feature_csv(std::ostream& os, const FeatureTable& table) {
    os << "patient_id";
    for (const auto& n : table.feature_names) os << ',' << n;
    os << ",label\n";
    for (Eigen::Index r = 0; r < table.x.rows(); ++r) {
        os << table.patient_ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < table.x.cols(); ++c) os << ',' << format_double(table.x(r, c));
        os << ',' << growth_class_name(table.labels[static_cast<std::size_t>(r)]) << '\n';
    }
}

} // namespace cephgrow::features
