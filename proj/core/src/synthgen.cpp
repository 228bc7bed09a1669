#include "cephgrow/synthgen.hpp"

#include "cephgrow/geometry.hpp"
#include "cephgrow/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cephgrow::synthgen {

const std::vector<Point2>& template_landmarks() {
    // Rough lateral-profile geometry, y up, anterior toward +x. Units are
    // arbitrary "template pixels"; the per-study scale multiplies them.
    static const std::vector<Point2> pts = {
        {100.0, 105.0}, // Sella
        {162.0, 118.0}, // Nasion
        {72.0, 68.0},   // Basion
        {85.0, 90.0},   // Porion
        {148.0, 95.0},  // Orbitale
        {117.0, 75.0},  // Pterygomaxillare
        {160.0, 62.0},  // PointA
        {158.0, 10.0},  // Pogonion
        {152.0, 4.0},   // Gnathion
        {144.0, 0.0},   // Menton
        {95.0, 22.0},   // GonionInferior
        {88.0, 80.0},   // Articulare
        {90.0, 30.0},   // GonionPosterior
        {115.0, 70.0},  // PosteriorNasalSpine
        {158.0, 68.0},  // AnteriorNasalSpine
        {157.0, 22.0},  // PointB
        {92.0, 88.0},   // Condylion
        {165.0, 130.0}, // Glabella
        {170.0, 8.0},   // SoftPogonion
        {93.0, 55.0},   // Ramus
    };
    return pts;
}

const std::vector<std::size_t>& chin_landmark_indices() {
    static const std::vector<std::size_t> idx = [] {
        const auto schema = LandmarkSchema::default_schema();
        std::vector<std::size_t> v;
        for (const char* name : {"PointB", "Pogonion", "Gnathion", "Menton", "SoftPogonion"})
            v.push_back(schema.require_index(name));
        return v;
    }();
    return idx;
}

namespace {

void validate(const SynthConfig& c) {
    if (c.n_patients == 0) throw std::invalid_argument("synthgen: n_patients must be >= 1");
    if (c.scale_levels.empty()) throw std::invalid_argument("synthgen: scale_levels must be non-empty");
    for (double s : c.scale_levels)
        if (!(s > 0.0)) throw std::invalid_argument("synthgen: scale levels must be positive");
    if (c.class_signal < 0.0 || c.class_signal > 1.0)
        throw std::invalid_argument("synthgen: class_signal must lie in [0,1]");
    if (c.landmark_noise_std < 0.0 || c.base_shape_std < 0.0 || c.growth_model.magnitude_std < 0.0 ||
        c.growth_model.direction_jitter < 0.0)
        throw std::invalid_argument("synthgen: negative spread parameter");
    const auto& g = c.growth_model;
    if (g.horizontal_weight < 0.0 || g.mixed_weight < 0.0 || g.vertical_weight < 0.0 ||
        g.horizontal_weight + g.mixed_weight + g.vertical_weight <= 0.0)
        throw std::invalid_argument("synthgen: growth prototype weights must be non-negative and not all zero");
    for (const auto& m : c.stage_age_models)
        if (!(m.min <= m.max) || m.min <= 0.0)
            throw std::invalid_argument("synthgen: bad stage age window");
}

std::string patient_name(std::size_t index, std::size_t n) {
    std::size_t width = 1;
    for (std::size_t v = n; v >= 10; v /= 10) ++width;
    if (width < 4) width = 4;
    std::string digits = std::to_string(index + 1);
    return "P" + std::string(width - digits.size(), '0') + digits;
}

// Prototype directions in the template plane: forward, down, and in between.
double prototype_angle(int which) {
    switch (which) {
        case 0: return std::atan2(-0.2, 1.0); // horizontal: chin forward
        case 1: return std::atan2(-1.0, 1.0); // mixed
        default: return std::atan2(-1.0, 0.2); // vertical: chin downward
    }
}

} // namespace

Cohort generate(const SynthConfig& config) {
    validate(config);
    const auto& base_template = template_landmarks();
    const auto& chin = chin_landmark_indices();

    Cohort cohort;
    cohort.schema = LandmarkSchema::default_schema();
    if (cohort.schema.size() != base_template.size())
        throw std::logic_error("synthgen: template does not match schema");

    const Rng master(config.seed);
    const auto& g = config.growth_model;
    const double wsum = g.horizontal_weight + g.mixed_weight + g.vertical_weight;

    cohort.series.reserve(config.n_patients);
    for (std::size_t pi = 0; pi < config.n_patients; ++pi) {
        Rng rng = master.child(pi);

        // Fixed draw order per patient; see header.
        std::array<double, 4> ages{};
        for (Stage st : kAllStages) {
            const auto& m = config.stage_age_models[stage_index(st)];
            ages[stage_index(st)] = rng.truncated_normal(m.mean, m.std_dev, m.min, m.max);
        }

        std::vector<Point2> base = base_template;
        if (config.base_shape_std > 0.0)
            for (auto& p : base) {
                p.x += rng.normal(0.0, config.base_shape_std);
                p.y += rng.normal(0.0, config.base_shape_std);
            }

        const std::size_t study = rng.index(config.scale_levels.size());
        geometry::SimilarityTransform tf;
        tf.scale = config.scale_levels[study];
        tf.rotation = config.rotation_range > 0.0
                          ? rng.uniform(-config.rotation_range, config.rotation_range)
                          : 0.0;
        tf.translation.x = config.translation_range > 0.0
                               ? rng.uniform(-config.translation_range, config.translation_range)
                               : 0.0;
        tf.translation.y = config.translation_range > 0.0
                               ? rng.uniform(-config.translation_range, config.translation_range)
                               : 0.0;

        const double pick = rng.uniform01() * wsum;
        const int proto = pick < g.horizontal_weight ? 0 : (pick < g.horizontal_weight + g.mixed_weight ? 1 : 2);
        double angle = prototype_angle(proto);
        if (g.direction_jitter > 0.0) angle += rng.normal(0.0, g.direction_jitter);
        const Point2 dir{std::cos(angle), std::sin(angle)};

        const double shared = rng.normal(g.magnitude_mean, g.magnitude_std);
        std::array<double, 3> increments{};
        for (auto& inc : increments) {
            const double indep = rng.normal(g.magnitude_mean, g.magnitude_std);
            inc = config.class_signal * shared + (1.0 - config.class_signal) * indep;
        }

        PatientSeries series;
        series.patient_id = patient_name(pi, config.n_patients);
        std::array<double, 4> cumulative{0.0, increments[0], increments[0] + increments[1],
                                         increments[0] + increments[1] + increments[2]};
        for (Stage st : kAllStages) {
            std::vector<Point2> pts = base;
            const double c = cumulative[stage_index(st)];
            for (std::size_t ci : chin) {
                pts[ci].x += c * dir.x;
                pts[ci].y += c * dir.y;
            }
            Cephalogram ceph;
            ceph.patient_id = series.patient_id;
            ceph.study = "study" + std::to_string(study + 1);
            ceph.stage = st;
            ceph.age_years = ages[stage_index(st)];
            ceph.landmarks = tf.apply(pts);
            if (config.landmark_noise_std > 0.0)
                for (auto& p : ceph.landmarks) {
                    p.x += rng.normal(0.0, config.landmark_noise_std);
                    p.y += rng.normal(0.0, config.landmark_noise_std);
                }
            series.by_stage[stage_index(st)] = std::move(ceph);
        }
        cohort.series.push_back(std::move(series));
    }
    return cohort;
}

} // namespace cephgrow::synthgen
