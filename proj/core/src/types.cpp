#include "cephgrow/types.hpp"

#include "cephgrow/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace cephgrow {

std::string_view stage_token(Stage s) {
    switch (s) {
        case Stage::S9: return "9";
        case Stage::S12: return "12";
        case Stage::S15: return "15";
        case Stage::S18: return "18";
    }
    throw std::logic_error("stage_token: bad stage");
}

std::optional<Stage> parse_stage(std::string_view tok) {
    if (tok == "9") return Stage::S9;
    if (tok == "12") return Stage::S12;
    if (tok == "15") return Stage::S15;
    if (tok == "18") return Stage::S18;
    return std::nullopt;
}

std::string_view growth_class_name(GrowthClass c) {
    switch (c) {
        case GrowthClass::Horizontal: return "Horizontal";
        case GrowthClass::Mixed: return "Mixed";
        case GrowthClass::Vertical: return "Vertical";
    }
    throw std::logic_error("growth_class_name: bad class");
}

std::optional<GrowthClass> parse_growth_class(std::string_view tok) {
    if (tok == "Horizontal") return GrowthClass::Horizontal;
    if (tok == "Mixed") return GrowthClass::Mixed;
    if (tok == "Vertical") return GrowthClass::Vertical;
    return std::nullopt;
}

const std::vector<std::string>& LandmarkSchema::required_names() {
    static const std::vector<std::string> names = {
        "Sella",     "Nasion",   "Basion",   "Porion",
        "Orbitale",  "Pterygomaxillare", "PointA", "Pogonion",
        "Gnathion",  "Menton",   "GonionInferior",
    };
    return names;
}

const std::vector<std::string>& LandmarkSchema::default_auxiliary_names() {
    static const std::vector<std::string> names = {
        "Articulare", "GonionPosterior", "PosteriorNasalSpine",
        "AnteriorNasalSpine", "PointB", "Condylion",
        "Glabella", "SoftPogonion", "Ramus",
    };
    return names;
}

LandmarkSchema::LandmarkSchema(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw std::invalid_argument("LandmarkSchema: empty landmark name");
        if (!index_.emplace(names_[i], i).second)
            throw std::invalid_argument("LandmarkSchema: duplicate landmark name '" + names_[i] + "'");
    }
}

LandmarkSchema LandmarkSchema::default_schema() {
    return with_auxiliary(default_auxiliary_names());
}

LandmarkSchema LandmarkSchema::with_auxiliary(std::vector<std::string> auxiliary) {
    std::vector<std::string> names = required_names();
    for (auto& n : auxiliary) names.push_back(std::move(n));
    return LandmarkSchema(std::move(names));
}

std::optional<std::size_t> LandmarkSchema::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t LandmarkSchema::require_index(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw std::invalid_argument("landmark '" + std::string(name) + "' not in schema");
    return *idx;
}

const PatientSeries* Cohort::find(std::string_view patient_id) const {
    auto it = std::lower_bound(series.begin(), series.end(), patient_id,
                               [](const PatientSeries& s, std::string_view id) { return s.patient_id < id; });
    if (it == series.end() || it->patient_id != patient_id) return nullptr;
    return &*it;
}

const std::array<StageAgeModel, 4>& default_stage_age_models() {
    static const std::array<StageAgeModel, 4> models = {{
        {9.06, 0.45, 6.00, 10.92},  // S9
        {12.07, 0.39, 10.00, 13.75}, // S12
        {15.00, 0.50, 13.80, 16.50}, // S15 (not tabulated; neutral window)
        {17.41, 1.71, 15.00, 28.42}, // S18
    }};
    return models;
}

std::map<Stage, StageAgeStats> cohort_summary(const Cohort& cohort) {
    if (cohort.series.empty()) throw std::invalid_argument("cohort_summary: empty cohort");
    std::map<Stage, std::vector<double>> ages;
    for (const auto& s : cohort.series)
        for (Stage st : kAllStages)
            if (s.has(st)) ages[st].push_back(s.at(st).age_years);

    std::map<Stage, StageAgeStats> out;
    for (auto& [st, xs] : ages) {
        StageAgeStats st_stats;
        st_stats.count = xs.size();
        st_stats.mean = stats::mean(xs);
        st_stats.std_dev = xs.size() >= 2 ? stats::sample_std(xs) : 0.0;
        st_stats.min = stats::min(xs);
        st_stats.max = stats::max(xs);
        out.emplace(st, st_stats);
    }
    return out;
}

} // namespace cephgrow
