#pragma once

#include "cephgrow/types.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cephgrow::cephalometrics {

// Angle between directed vectors p1->p2 and q1->q2, degrees in [0,180].
double line_angle(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2);

// The three central growth measurements. Angles use the undirected-line
// convention (folded to [0,90]); PN-AN is a signed linear measure in pixel
// units and therefore scales with the image.
double sn_mp(const Cephalogram& ceph, const LandmarkSchema& schema);
double fa(const Cephalogram& ceph, const LandmarkSchema& schema);
double pn_an(const Cephalogram& ceph, const LandmarkSchema& schema);

struct MeasurementDef {
    enum class Kind {
        LineAngleFolded, // args: p1,p2,q1,q2 -> angle between lines, [0,90]
        VertexAngle,     // args: a,vertex,b  -> ray angle at vertex, [0,180]
        DistanceRatio,   // args: a,b,c,d     -> |a-b| / |c-d|
        PnAn,            // fixed landmark set, signed linear measure
    };
    std::string name;
    Kind kind = Kind::LineAngleFolded;
    std::vector<std::string> args;
};

class MeasurementPanel {
public:
    // 15 entries; the first three are SN-MP, FA, PN-AN. The remainder favor
    // angles and ratios so only PN-AN is scale-sensitive.
    static MeasurementPanel default_panel();
    static MeasurementPanel central_three();
    explicit MeasurementPanel(std::vector<MeasurementDef> defs);

    const std::vector<MeasurementDef>& entries() const { return defs_; }
    std::vector<std::string> names() const;
    std::size_t size() const { return defs_.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;

private:
    std::vector<MeasurementDef> defs_;
};

struct MeasurementVector {
    std::string patient_id;
    Stage stage = Stage::S9;
    std::vector<double> values; // panel order, all finite
};

MeasurementVector measure_panel(const Cephalogram& ceph, const LandmarkSchema& schema,
                                const MeasurementPanel& panel);

// Panel values for every cephalogram of a cohort, addressable by patient/stage.
struct CohortMeasurements {
    std::vector<std::string> names;
    std::map<std::string, std::array<std::optional<std::vector<double>>, 4>> by_patient;

    const std::vector<double>* find(const std::string& patient_id, Stage stage) const;
    std::size_t require_measurement_index(std::string_view name) const;
};

CohortMeasurements measure_cohort(const Cohort& cohort, const MeasurementPanel& panel);

} // namespace cephgrow::cephalometrics
