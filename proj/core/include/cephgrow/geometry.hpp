#pragma once

#include "cephgrow/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace cephgrow::geometry {

// Ordered landmark coordinates (schema order) with provenance.
struct ShapeMatrix {
    std::string patient_id;
    Stage stage = Stage::S9;
    std::vector<Point2> points;
};

struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0; // radians, proper rotation only
    Point2 translation{};

    Point2 apply(const Point2& p) const;
    std::vector<Point2> apply(std::span<const Point2> pts) const;
};

Point2 centroid(std::span<const Point2> pts);

// Sum of distances to `center` (the size convention used throughout:
// alignment requirement (2) normalizes this sum to one).
double sum_distance_size(std::span<const Point2> pts, const Point2& center);

struct RotationFit {
    double angle = 0.0;
    bool degenerate = false; // both alignment sums vanished; angle fixed to 0
};

// Angle minimizing sum |R(angle)*a_i - b_i|^2 for centered point sets:
// angle = atan2(sum(a x b), sum(a . b)). Proper rotations only.
RotationFit optimal_rotation(std::span<const Point2> a, std::span<const Point2> b);

struct GpaResult {
    std::vector<ShapeMatrix> aligned;
    std::vector<Point2> mean_shape;
    double residual = 0.0; // sum over shapes of squared distance to the mean
    int iterations = 0;
    bool converged = false;
};

// Generalized Procrustes alignment. Every output shape has its centroid at
// the origin and sum of distances to the origin equal to one; rotations are
// fitted iteratively against the evolving mean until the mean moves less
// than `tol` per coordinate (or `max_iterations`).
GpaResult procrustes_align(const std::vector<ShapeMatrix>& shapes, double tol = 1e-10,
                           int max_iterations = 100);

// Rigid move to the Sella-Nasion frame: Sella to (0,0), Nasion to (0,+d)
// with d the original Sella-Nasion distance. No scaling.
ShapeMatrix transform_to_sn_frame(const Cephalogram& ceph, const LandmarkSchema& schema);

struct ScaleDiagnostics {
    struct Entry {
        std::string patient_id;
        Stage stage = Stage::S9;
        double centroid_size = 0.0;
    };
    std::vector<Entry> sizes;
    std::vector<double> histogram_edges;       // nbins+1 edges
    std::vector<std::size_t> histogram_counts; // nbins counts
    std::vector<double> mode_centers;          // detected scale clusters, ascending
    // One cloud per landmark over all cephalograms, for coordinate-range plots.
    std::vector<std::vector<Point2>> landmark_clouds;
};

ScaleDiagnostics scale_diagnostics(const Cohort& cohort);

// All cephalograms of a cohort as shapes, in (series, stage) order.
std::vector<ShapeMatrix> cohort_shapes(const Cohort& cohort);

} // namespace cephgrow::geometry
