#pragma once

#include "cephgrow/analysis.hpp"
#include "cephgrow/cephalometrics.hpp"
#include "cephgrow/geometry.hpp"
#include "cephgrow/types.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

namespace cephgrow::features {

enum class DataType : int { Ceph = 0, Proc = 1, Trans = 2 };
enum class PeriodVariant : int { At9 = 0, At12 = 1, Diff = 2, Both = 3, BaseAndDiff = 4 };

std::string_view data_type_token(DataType t);        // "ceph" / "proc" / "trans"
std::string_view period_variant_token(PeriodVariant v); // "9" / "12" / "12-9" / "9,12" / "9,12-9"
std::string period_variant_file_token(PeriodVariant v); // filesystem-safe form

struct Scenario {
    DataType data_type = DataType::Ceph;
    PeriodVariant variant = PeriodVariant::At9;
    std::string target; // "SN-MP" / "FA" / "PN-AN"

    std::string id() const;       // e.g. "ceph_12m9_SN-MP"
    std::string describe() const; // e.g. "ceph / 12-9 / SN-MP(18-9)"
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline const std::vector<std::string>& target_names() {
    static const std::vector<std::string> names{"SN-MP", "FA", "PN-AN"};
    return names;
}

// The full grid: 3 data types x 5 period variants x 3 targets = 45, in that
// nesting order.
std::vector<Scenario> enumerate_scenarios();

// Flat per-cephalogram coordinate features (x,y per landmark, schema order),
// one variant for Procrustes coordinates and one for the Sella-Nasion frame.
struct CoordinateSet {
    std::vector<std::string> landmark_names;
    std::map<std::string, std::array<std::optional<std::vector<double>>, 4>> by_patient;

    const std::vector<double>* find(const std::string& patient_id, Stage stage) const;
};

struct FeatureTable {
    Scenario scenario;
    std::vector<std::string> feature_names;
    std::vector<std::string> patient_ids; // row order, sorted
    Eigen::MatrixXd x;                    // rows x features, no missing values
    std::vector<GrowthClass> labels;
    std::vector<std::string> skipped; // patients excluded, with reason
};

struct FeatureInputs {
    const Cohort* cohort = nullptr; // ages
    const cephalometrics::CohortMeasurements* measurements = nullptr;
    const CoordinateSet* procrustes = nullptr;
    const CoordinateSet* transformed = nullptr;
    const std::vector<analysis::LabelSet>* labels = nullptr; // one set per target
};

// Expected row width for a scenario given the base block sizes.
std::size_t expected_width(const Scenario& scenario, std::size_t panel_size, std::size_t n_landmarks);

// Bridges from the geometry module's outputs.
CoordinateSet procrustes_coordinates(const LandmarkSchema& schema, const geometry::GpaResult& gpa);
CoordinateSet transformed_coordinates(const Cohort& cohort);

FeatureTable assemble(const FeatureInputs& inputs, const Scenario& scenario);

void write_feature_csv(std::ostream& os, const FeatureTable& table);

} // namespace cephgrow::features
