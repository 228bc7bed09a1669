#pragma once

#include "cephgrow/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace cephgrow::synthgen {

// Mixture of growth-direction prototypes for the chin landmark block plus
// per-period displacement magnitudes.
struct GrowthModel {
    double horizontal_weight = 1.0;
    double mixed_weight = 1.0;
    double vertical_weight = 1.0;
    double direction_jitter = 0.25; // radians around the chosen prototype
    double magnitude_mean = 6.0;    // template pixels per period
    double magnitude_std = 2.5;
};

struct SynthConfig {
    std::size_t n_patients = 639;
    std::uint64_t seed = 1;
    std::array<StageAgeModel, 4> stage_age_models = default_stage_age_models();
    // One image study per scale level; each patient is assigned to a study and
    // inherits its exact scale ("three or four different scales").
    std::vector<double> scale_levels{1.0, 1.25, 1.6, 2.0};
    double landmark_noise_std = 0.5; // pixels, i.i.d. per coordinate
    double base_shape_std = 2.0;     // per-patient anatomy variation
    GrowthModel growth_model{};
    // 1: the 9->12 increment determines the later increments (and thus the
    // label); 0: increments are i.i.d. across periods.
    double class_signal = 0.3;
    double rotation_range = 0.35;    // +/- radians, per patient
    double translation_range = 80.0; // +/- pixels, per patient
};

// Fixed 20-landmark profile template in default-schema order.
const std::vector<Point2>& template_landmarks();

// Landmarks displaced by growth (the five chin points).
const std::vector<std::size_t>& chin_landmark_indices();

// Deterministic synthetic cohort: per-patient base anatomy, growth increments
// along a patient-specific direction, one similarity transform per patient,
// then landmark noise. One random substream per patient, so output is
// independent of generation order.
Cohort generate(const SynthConfig& config);

} // namespace cephgrow::synthgen
