#include "cephgrow/cephalometrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cephgrow::cephalometrics {

namespace {

constexpr double kRadToDeg = 57.295779513082320877;

double fold_to_quarter(double deg) { return deg > 90.0 ? 180.0 - deg : deg; }

double ray_angle(const Point2& vertex, const Point2& a, const Point2& b) {
    const Point2 va{a.x - vertex.x, a.y - vertex.y};
    const Point2 vb{b.x - vertex.x, b.y - vertex.y};
    const double na = std::hypot(va.x, va.y);
    const double nb = std::hypot(vb.x, vb.y);
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("vertex angle: zero-length ray");
    double c = (va.x * vb.x + va.y * vb.y) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * kRadToDeg;
}

} // namespace

double line_angle(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
    const Point2 u{p2.x - p1.x, p2.y - p1.y};
    const Point2 v{q2.x - q1.x, q2.y - q1.y};
    const double nu = std::hypot(u.x, u.y);
    const double nv = std::hypot(v.x, v.y);
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("line_angle: zero-length vector");
    double c = (u.x * v.x + u.y * v.y) / (nu * nv);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * kRadToDeg;
}

namespace {

const Point2& lm(const Cephalogram& ceph, const LandmarkSchema& schema, std::string_view name) {
    return ceph.at(schema.require_index(name));
}

} // namespace

double sn_mp(const Cephalogram& ceph, const LandmarkSchema& schema) {
    return fold_to_quarter(line_angle(lm(ceph, schema, "Sella"), lm(ceph, schema, "Nasion"),
                                      lm(ceph, schema, "GonionInferior"), lm(ceph, schema, "Menton")));
}

double fa(const Cephalogram& ceph, const LandmarkSchema& schema) {
    return fold_to_quarter(line_angle(lm(ceph, schema, "Basion"), lm(ceph, schema, "Nasion"),
                                      lm(ceph, schema, "Pterygomaxillare"), lm(ceph, schema, "Gnathion")));
}

double pn_an(const Cephalogram& ceph, const LandmarkSchema& schema) {
    const Point2& porion = lm(ceph, schema, "Porion");
    const Point2& orbitale = lm(ceph, schema, "Orbitale");
    const Point2& nasion = lm(ceph, schema, "Nasion");
    const Point2& point_a = lm(ceph, schema, "PointA");
    const Point2& pogonion = lm(ceph, schema, "Pogonion");

    const double ux = orbitale.x - porion.x;
    const double uy = orbitale.y - porion.y;
    const double n = std::hypot(ux, uy);
    if (n == 0.0) throw std::invalid_argument("pn_an: Porion and Orbitale coincide");
    const double ix = ux / n, iy = uy / n; // anterior unit direction

    const double pn = (pogonion.x - nasion.x) * ix + (pogonion.y - nasion.y) * iy;
    const double an = (point_a.x - nasion.x) * ix + (point_a.y - nasion.y) * iy;
    return pn - an;
}

MeasurementPanel::MeasurementPanel(std::vector<MeasurementDef> defs) : defs_(std::move(defs)) {
    if (defs_.empty()) throw std::invalid_argument("MeasurementPanel: no entries");
    for (const auto& d : defs_) {
        const std::size_t want = d.kind == MeasurementDef::Kind::VertexAngle ? 3
                                 : d.kind == MeasurementDef::Kind::PnAn      ? 0
                                                                             : 4;
        if (d.args.size() != want)
            throw std::invalid_argument("MeasurementPanel: wrong argument count for " + d.name);
    }
    const bool has_central = index_of("SN-MP") && index_of("FA") && index_of("PN-AN");
    if (!has_central)
        throw std::invalid_argument("MeasurementPanel: SN-MP, FA and PN-AN are mandatory entries");
}

MeasurementPanel MeasurementPanel::central_three() {
    using K = MeasurementDef::Kind;
    return MeasurementPanel({
        {"SN-MP", K::LineAngleFolded, {"Sella", "Nasion", "GonionInferior", "Menton"}},
        {"FA", K::LineAngleFolded, {"Basion", "Nasion", "Pterygomaxillare", "Gnathion"}},
        {"PN-AN", K::PnAn, {}},
    });
}

MeasurementPanel MeasurementPanel::default_panel() {
    using K = MeasurementDef::Kind;
    return MeasurementPanel({
        {"SN-MP", K::LineAngleFolded, {"Sella", "Nasion", "GonionInferior", "Menton"}},
        {"FA", K::LineAngleFolded, {"Basion", "Nasion", "Pterygomaxillare", "Gnathion"}},
        {"PN-AN", K::PnAn, {}},
        {"SNA", K::VertexAngle, {"Sella", "Nasion", "PointA"}},
        {"SNPog", K::VertexAngle, {"Sella", "Nasion", "Pogonion"}},
        {"NSBa", K::VertexAngle, {"Nasion", "Sella", "Basion"}},
        {"NAPog", K::VertexAngle, {"Nasion", "PointA", "Pogonion"}},
        {"FMA", K::LineAngleFolded, {"Porion", "Orbitale", "GonionInferior", "Menton"}},
        {"YAxis", K::LineAngleFolded, {"Sella", "Gnathion", "Porion", "Orbitale"}},
        {"SNFH", K::LineAngleFolded, {"Sella", "Nasion", "Porion", "Orbitale"}},
        {"BaNFH", K::LineAngleFolded, {"Basion", "Nasion", "Porion", "Orbitale"}},
        {"PtmAFH", K::LineAngleFolded, {"Pterygomaxillare", "PointA", "Porion", "Orbitale"}},
        {"FaceHeightRatio", K::DistanceRatio, {"Sella", "GonionInferior", "Nasion", "Menton"}},
        {"JawRatio", K::DistanceRatio, {"GonionInferior", "Menton", "Sella", "Nasion"}},
        {"ChinAngle", K::VertexAngle, {"Pogonion", "Gnathion", "Menton"}},
    });
}

std::vector<std::string> MeasurementPanel::names() const {
    std::vector<std::string> out;
    out.reserve(defs_.size());
    for (const auto& d : defs_) out.push_back(d.name);
    return out;
}

std::optional<std::size_t> MeasurementPanel::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < defs_.size(); ++i)
        if (defs_[i].name == name) return i;
    return std::nullopt;
}

MeasurementVector measure_panel(const Cephalogram& ceph, const LandmarkSchema& schema,
                                const MeasurementPanel& panel) {
    MeasurementVector out;
    out.patient_id = ceph.patient_id;
    out.stage = ceph.stage;
    out.values.reserve(panel.size());
    for (const auto& d : panel.entries()) {
        try {
            double v = 0.0;
            switch (d.kind) {
                case MeasurementDef::Kind::LineAngleFolded:
                    v = fold_to_quarter(line_angle(lm(ceph, schema, d.args[0]), lm(ceph, schema, d.args[1]),
                                                   lm(ceph, schema, d.args[2]), lm(ceph, schema, d.args[3])));
                    break;
                case MeasurementDef::Kind::VertexAngle:
                    v = ray_angle(lm(ceph, schema, d.args[1]), lm(ceph, schema, d.args[0]),
                                  lm(ceph, schema, d.args[2]));
                    break;
                case MeasurementDef::Kind::DistanceRatio: {
                    const Point2& a = lm(ceph, schema, d.args[0]);
                    const Point2& b = lm(ceph, schema, d.args[1]);
                    const Point2& c = lm(ceph, schema, d.args[2]);
                    const Point2& e = lm(ceph, schema, d.args[3]);
                    const double denom = std::hypot(c.x - e.x, c.y - e.y);
                    if (denom == 0.0) throw std::invalid_argument("zero denominator distance");
                    v = std::hypot(a.x - b.x, a.y - b.y) / denom;
                    break;
                }
                case MeasurementDef::Kind::PnAn:
                    v = pn_an(ceph, schema);
                    break;
            }
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
            out.values.push_back(v);
        } catch (const std::exception& e) {
            throw std::invalid_argument("measurement " + d.name + " failed for " + ceph.patient_id + "/" +
                                        std::string(stage_token(ceph.stage)) + ": " + e.what());
        }
    }
    return out;
}

const std::vector<double>* CohortMeasurements::find(const std::string& patient_id, Stage stage) const {
    auto it = by_patient.find(patient_id);
    if (it == by_patient.end()) return nullptr;
    const auto& slot = it->second[stage_index(stage)];
    return slot ? &*slot : nullptr;
}

std::size_t CohortMeasurements::require_measurement_index(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw std::invalid_argument("measurement '" + std::string(name) + "' not in panel");
}

CohortMeasurements measure_cohort(const Cohort& cohort, const MeasurementPanel& panel) {
    CohortMeasurements out;
    out.names = panel.names();
    for (const auto& series : cohort.series)
        for (Stage st : kAllStages) {
            if (!series.has(st)) continue;
            MeasurementVector mv = measure_panel(series.at(st), cohort.schema, panel);
            out.by_patient[series.patient_id][stage_index(st)] = std::move(mv.values);
        }
    return out;
}

} // namespace cephgrow::cephalometrics
