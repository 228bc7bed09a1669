#include "cephgrow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cephgrow::geometry {

Point2 SimilarityTransform::apply(const Point2& p) const {
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return {scale * (c * p.x - s * p.y) + translation.x,
            scale * (s * p.x + c * p.y) + translation.y};
}

std::vector<Point2> SimilarityTransform::apply(std::span<const Point2> pts) const {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(apply(p));
    return out;
}

Point2 centroid(std::span<const Point2> pts) {
    if (pts.empty()) throw std::invalid_argument("centroid: empty point set");
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
    }
    const double inv = 1.0 / static_cast<double>(pts.size());
    return {sx * inv, sy * inv};
}

double sum_distance_size(std::span<const Point2> pts, const Point2& center) {
    double s = 0.0;
    for (const auto& p : pts) s += std::hypot(p.x - center.x, p.y - center.y);
    return s;
}

RotationFit optimal_rotation(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("optimal_rotation: point sets must be equal-sized and non-empty");
    double cross = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cross += a[i].x * b[i].y - a[i].y * b[i].x;
        dot += a[i].x * b[i].x + a[i].y * b[i].y;
    }
    if (cross == 0.0 && dot == 0.0) return {0.0, true};
    return {std::atan2(cross, dot), false};
}

namespace {

void rotate_in_place(std::vector<Point2>& pts, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (auto& p : pts) {
        const double x = c * p.x - s * p.y;
        const double y = s * p.x + c * p.y;
        p.x = x;
        p.y = y;
    }
}

std::vector<Point2> shape_mean(const std::vector<ShapeMatrix>& shapes) {
    std::vector<Point2> mean(shapes.front().points.size(), Point2{});
    for (const auto& s : shapes)
        for (std::size_t i = 0; i < mean.size(); ++i) {
            mean[i].x += s.points[i].x;
            mean[i].y += s.points[i].y;
        }
    const double inv = 1.0 / static_cast<double>(shapes.size());
    for (auto& p : mean) {
        p.x *= inv;
        p.y *= inv;
    }
    return mean;
}

double squared_residual(const std::vector<ShapeMatrix>& shapes, const std::vector<Point2>& mean) {
    double r = 0.0;
    for (const auto& s : shapes)
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double dx = s.points[i].x - mean[i].x;
            const double dy = s.points[i].y - mean[i].y;
            r += dx * dx + dy * dy;
        }
    return r;
}

} // namespace

GpaResult procrustes_align(const std::vector<ShapeMatrix>& shapes, double tol, int max_iterations) {
    if (shapes.empty()) throw std::invalid_argument("procrustes_align: no shapes");
    const std::size_t n_points = shapes.front().points.size();

    GpaResult out;
    out.aligned = shapes;
    for (auto& s : out.aligned) {
        if (s.points.size() != n_points)
            throw std::invalid_argument("procrustes_align: inconsistent landmark count for " + s.patient_id);
        const Point2 c = centroid(s.points);
        for (auto& p : s.points) {
            p.x -= c.x;
            p.y -= c.y;
        }
        const double size = sum_distance_size(s.points, Point2{});
        if (size <= 0.0)
            throw std::invalid_argument("procrustes_align: degenerate (zero-size) shape " + s.patient_id +
                                        "/" + std::string(stage_token(s.stage)));
        const double inv = 1.0 / size;
        for (auto& p : s.points) {
            p.x *= inv;
            p.y *= inv;
        }
    }

    // First normalized shape anchors the orientation; the mean then evolves
    // under rotate-to-mean sweeps.
    std::vector<Point2> mean = out.aligned.front().points;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        out.iterations = iter;
        for (auto& s : out.aligned) {
            const RotationFit fit = optimal_rotation(s.points, mean);
            if (fit.angle != 0.0) rotate_in_place(s.points, fit.angle);
        }
        std::vector<Point2> next = shape_mean(out.aligned);
        double move = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            move = std::max(move, std::fabs(next[i].x - mean[i].x));
            move = std::max(move, std::fabs(next[i].y - mean[i].y));
        }
        mean = std::move(next);
        if (move < tol) {
            out.converged = true;
            break;
        }
    }
    out.mean_shape = std::move(mean);
    out.residual = squared_residual(out.aligned, out.mean_shape);
    return out;
}

ShapeMatrix transform_to_sn_frame(const Cephalogram& ceph, const LandmarkSchema& schema) {
    const Point2 sella = ceph.at(schema.require_index("Sella"));
    const Point2 nasion = ceph.at(schema.require_index("Nasion"));
    const double dx = nasion.x - sella.x;
    const double dy = nasion.y - sella.y;
    if (dx == 0.0 && dy == 0.0)
        throw std::invalid_argument("transform_to_sn_frame: Sella and Nasion coincide for " +
                                    ceph.patient_id + "/" + std::string(stage_token(ceph.stage)));
    // Rotate the Sella->Nasion direction onto +y.
    const double angle = std::atan2(dy, dx);
    const double rot = 1.5707963267948966 - angle;
    const double c = std::cos(rot);
    const double s = std::sin(rot);

    ShapeMatrix out;
    out.patient_id = ceph.patient_id;
    out.stage = ceph.stage;
    out.points.reserve(ceph.landmarks.size());
    for (const auto& p : ceph.landmarks) {
        const double x = p.x - sella.x;
        const double y = p.y - sella.y;
        out.points.push_back({c * x - s * y, s * x + c * y});
    }
    return out;
}

std::vector<ShapeMatrix> cohort_shapes(const Cohort& cohort) {
    std::vector<ShapeMatrix> shapes;
    for (const auto& series : cohort.series)
        for (Stage st : kAllStages) {
            if (!series.has(st)) continue;
            const Cephalogram& ceph = series.at(st);
            shapes.push_back({ceph.patient_id, st, ceph.landmarks});
        }
    return shapes;
}

ScaleDiagnostics scale_diagnostics(const Cohort& cohort) {
    if (cohort.series.empty()) throw std::invalid_argument("scale_diagnostics: empty cohort");

    ScaleDiagnostics diag;
    diag.landmark_clouds.resize(cohort.schema.size());
    for (const auto& series : cohort.series)
        for (Stage st : kAllStages) {
            if (!series.has(st)) continue;
            const Cephalogram& ceph = series.at(st);
            const Point2 c = centroid(ceph.landmarks);
            diag.sizes.push_back({ceph.patient_id, st, sum_distance_size(ceph.landmarks, c)});
            for (std::size_t i = 0; i < ceph.landmarks.size(); ++i)
                diag.landmark_clouds[i].push_back(ceph.landmarks[i]);
        }

    std::vector<double> values;
    values.reserve(diag.sizes.size());
    for (const auto& e : diag.sizes) values.push_back(e.centroid_size);
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi <= lo) hi = lo + 1.0; // all sizes equal: single degenerate bin span
    const std::size_t nbins =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(std::sqrt(double(values.size())))), 8, 64);

    diag.histogram_edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i)
        diag.histogram_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nbins);
    diag.histogram_counts.assign(nbins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(nbins));
        if (b >= nbins) b = nbins - 1;
        ++diag.histogram_counts[b];
    }

    // Mode detection: 1-2-1 smoothing, then local maxima above 5% of the peak.
    std::vector<double> smooth(nbins, 0.0);
    for (std::size_t i = 0; i < nbins; ++i) {
        const double prev = i > 0 ? double(diag.histogram_counts[i - 1]) : 0.0;
        const double next = i + 1 < nbins ? double(diag.histogram_counts[i + 1]) : 0.0;
        smooth[i] = 0.25 * prev + 0.5 * double(diag.histogram_counts[i]) + 0.25 * next;
    }
    const double peak = *std::max_element(smooth.begin(), smooth.end());
    const double floor_level = 0.05 * peak;
    std::size_t i = 0;
    while (i < nbins) {
        if (smooth[i] <= floor_level) {
            ++i;
            continue;
        }
        // Walk one above-floor hill; its weighted center is one mode.
        double mass = 0.0, center = 0.0;
        double hill_max = 0.0;
        while (i < nbins && smooth[i] > floor_level) {
            const double mid = 0.5 * (diag.histogram_edges[i] + diag.histogram_edges[i + 1]);
            mass += double(diag.histogram_counts[i]);
            center += double(diag.histogram_counts[i]) * mid;
            hill_max = std::max(hill_max, smooth[i]);
            ++i;
        }
        if (mass > 0.0 && hill_max >= 0.25 * peak) diag.mode_centers.push_back(center / mass);
    }
    return diag;
}

} // namespace cephgrow::geometry
