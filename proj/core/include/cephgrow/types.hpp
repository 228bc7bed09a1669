#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cephgrow {

// Developmental stages of the longitudinal series. S15 exists only for the
// growth-period correlation analysis; the prediction pipeline needs 9/12/18.
enum class Stage : int { S9 = 0, S12 = 1, S15 = 2, S18 = 3 };

inline constexpr std::array<Stage, 4> kAllStages{Stage::S9, Stage::S12, Stage::S15, Stage::S18};
inline constexpr std::array<Stage, 3> kMandatoryStages{Stage::S9, Stage::S12, Stage::S18};

constexpr std::size_t stage_index(Stage s) { return static_cast<std::size_t>(s); }
std::string_view stage_token(Stage s);              // "9", "12", "15", "18"
std::optional<Stage> parse_stage(std::string_view); // from the CSV stage column

enum class GrowthClass : int { Horizontal = 0, Mixed = 1, Vertical = 2 };

std::string_view growth_class_name(GrowthClass c);
std::optional<GrowthClass> parse_growth_class(std::string_view);

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// Ordered landmark name set. The required 11 names are fixed; the 9
// auxiliary names are configurable and default to a placeholder panel that
// keeps the total at 20 (40 coordinates per timestamp).
class LandmarkSchema {
public:
    static const std::vector<std::string>& required_names();
    static const std::vector<std::string>& default_auxiliary_names();
    static LandmarkSchema default_schema();
    static LandmarkSchema with_auxiliary(std::vector<std::string> auxiliary);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require_index(std::string_view name) const; // throws if absent

    friend bool operator==(const LandmarkSchema&, const LandmarkSchema&) = default;

private:
    explicit LandmarkSchema(std::vector<std::string> names);

    std::vector<std::string> names_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// One radiograph: named 2D landmarks (schema order) plus metadata.
struct Cephalogram {
    std::string patient_id;
    std::string study;
    Stage stage = Stage::S9;
    double age_years = 0.0;
    std::vector<Point2> landmarks; // schema order, complete

    const Point2& at(std::size_t schema_index) const { return landmarks[schema_index]; }

    friend bool operator==(const Cephalogram&, const Cephalogram&) = default;
};

// A patient's cephalograms across stages; at most one per stage.
struct PatientSeries {
    std::string patient_id;
    std::array<std::optional<Cephalogram>, 4> by_stage;

    bool has(Stage s) const { return by_stage[stage_index(s)].has_value(); }
    const Cephalogram& at(Stage s) const { return *by_stage[stage_index(s)]; }
    bool has_mandatory_stages() const {
        return has(Stage::S9) && has(Stage::S12) && has(Stage::S18);
    }

    friend bool operator==(const PatientSeries&, const PatientSeries&) = default;
};

struct Cohort {
    LandmarkSchema schema = LandmarkSchema::default_schema();
    std::vector<PatientSeries> series; // sorted by patient_id, ids unique

    const PatientSeries* find(std::string_view patient_id) const;

    friend bool operator==(const Cohort&, const Cohort&) = default;
};

// Plausible age window per stage; defaults follow the cohort table
// (mean +/- std with hard min/max). S15 is not tabulated and uses a
// neutral window.
struct StageAgeModel {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

const std::array<StageAgeModel, 4>& default_stage_age_models();

struct StageAgeStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0; // sample convention; 0 when count < 2
    double min = 0.0;
    double max = 0.0;
};

// Per-stage age statistics over a cohort; throws on an empty cohort.
std::map<Stage, StageAgeStats> cohort_summary(const Cohort& cohort);

} // namespace cephgrow
