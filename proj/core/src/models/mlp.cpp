#include "cephgrow/models/mlp.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace cephgrow::models {

namespace {

using MatF = MlpCore<float>::Mat;
using VecF = MlpCore<float>::Vec;

// Adam with the Keras-era defaults this project pins: lr 1e-3, beta1 0.9,
// beta2 0.999, eps 1e-7, full-batch updates.
struct Adam {
    std::vector<MatF> mw, vw;
    std::vector<VecF> mb, vb;
    long t = 0;

    explicit Adam(const MlpCore<float>& net) {
        for (const auto& wl : net.w) {
            mw.push_back(MatF::Zero(wl.rows(), wl.cols()));
            vw.push_back(MatF::Zero(wl.rows(), wl.cols()));
        }
        for (const auto& bl : net.b) {
            mb.push_back(VecF::Zero(bl.size()));
            vb.push_back(VecF::Zero(bl.size()));
        }
    }

    void step(MlpCore<float>& net, const std::vector<MatF>& gw, const std::vector<VecF>& gb) {
        constexpr float lr = 1e-3f, b1 = 0.9f, b2 = 0.999f, eps = 1e-7f;
        ++t;
        const float c1 = 1.0f - std::pow(b1, float(t));
        const float c2 = 1.0f - std::pow(b2, float(t));
        for (std::size_t l = 0; l < net.w.size(); ++l) {
            mw[l] = b1 * mw[l] + (1.0f - b1) * gw[l];
            vw[l] = b2 * vw[l] + (1.0f - b2) * gw[l].cwiseProduct(gw[l]);
            net.w[l].array() -= lr * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + eps);
            mb[l] = b1 * mb[l] + (1.0f - b1) * gb[l];
            vb[l] = b2 * vb[l] + (1.0f - b2) * gb[l].cwiseProduct(gb[l]);
            net.b[l].array() -= lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + eps);
        }
    }
};

// Stratified validation pick: round(fraction * n_c) per class, never the
// whole class. Indices are consumed in class order from one stream.
void split_validation(const std::vector<GrowthClass>& labels, double fraction, Rng& rng,
                      std::vector<int>& train_idx, std::vector<int>& val_idx) {
    train_idx.clear();
    val_idx.clear();
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (static_cast<int>(labels[i]) == c) members.push_back(static_cast<int>(i));
        if (members.empty()) continue;
        rng.shuffle(members);
        auto take = static_cast<std::size_t>(std::lround(fraction * double(members.size())));
        if (take >= members.size()) take = members.size() - 1;
        for (std::size_t i = 0; i < members.size(); ++i)
            (i < take ? val_idx : train_idx).push_back(members[i]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
}

MatF gather_rows(const MatF& x, const std::vector<int>& idx) {
    MatF out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
    return out;
}

} // namespace

std::unique_ptr<TrainedModel> train_mlp(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels,
                                        const TrainConfig& config) {
    validate_training_inputs(x, labels);

    Standardizer scaler;
    if (config.standardize) scaler = Standardizer::fit(x);
    const Matrix xs = scaler.active ? scaler.apply(x) : x;
    const MatF xf = xs.cast<float>();

    Rng rng(config.seed);
    Rng split_rng = rng.child(1);
    Rng init_rng = rng.child(2);

    std::vector<int> train_idx, val_idx;
    split_validation(labels, config.validation_fraction, split_rng, train_idx, val_idx);

    const MatF xt = gather_rows(xf, train_idx);
    const MatF xv = gather_rows(xf, val_idx);
    std::vector<int> yt, yv;
    for (int i : train_idx) yt.push_back(static_cast<int>(labels[static_cast<std::size_t>(i)]));
    for (int i : val_idx) yv.push_back(static_cast<int>(labels[static_cast<std::size_t>(i)]));

    MlpCore<float> net(static_cast<int>(x.cols()), spec.hidden_layers);
    net.init_glorot(init_rng);
    Adam adam(net);

    TrainMeta meta;
    meta.seed = config.seed;

    const bool can_validate = !val_idx.empty();
    float best_loss = std::numeric_limits<float>::infinity();
    MlpCore<float> best = net;
    int wait = 0;

    std::vector<MatF> gw;
    std::vector<VecF> gb;
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        net.gradients(xt, yt, gw, gb);
        adam.step(net, gw, gb);
        meta.epochs_run = epoch + 1;
        if (!can_validate) continue;
        const float vl = net.loss(xv, yv);
        if (vl < best_loss) {
            best_loss = vl;
            best = net;
            wait = 0;
        } else if (++wait >= config.patience) {
            meta.stopped_early = true;
            net = best; // restore the best epoch's weights
            break;
        }
    }

    return std::make_unique<MlpModel>(spec, meta, std::move(scaler), std::move(net));
}

Matrix MlpModel::probabilities(const Matrix& rows) const {
    check_width(rows);
    const Matrix xs = scaler_.active ? scaler_.apply(rows) : rows;
    return core_.probabilities(xs.cast<float>()).cast<double>();
}

std::vector<GrowthClass> MlpModel::predict(const Matrix& rows) const {
    const Matrix p = probabilities(rows);
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        Eigen::Index best = 0;
        p.row(r).maxCoeff(&best);
        out.push_back(static_cast<GrowthClass>(best));
    }
    return out;
}

std::string MlpModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["epochs_run"] = meta_.epochs_run;
    j["stopped_early"] = meta_.stopped_early;
    if (scaler_.active) {
        j["scaler"]["mean"] = std::vector<double>(scaler_.mean.data(), scaler_.mean.data() + scaler_.mean.size());
        j["scaler"]["scale"] =
            std::vector<double>(scaler_.scale.data(), scaler_.scale.data() + scaler_.scale.size());
    }
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < core_.w.size(); ++l) {
        nlohmann::json layer;
        layer["rows"] = core_.w[l].rows();
        layer["cols"] = core_.w[l].cols();
        std::vector<double> wflat;
        wflat.reserve(static_cast<std::size_t>(core_.w[l].size()));
        for (Eigen::Index c = 0; c < core_.w[l].cols(); ++c)
            for (Eigen::Index r = 0; r < core_.w[l].rows(); ++r) wflat.push_back(core_.w[l](r, c));
        layer["w"] = wflat;
        std::vector<double> bflat(core_.b[l].data(), core_.b[l].data() + core_.b[l].size());
        layer["b"] = bflat;
        layers.push_back(std::move(layer));
    }
    j["layers"] = std::move(layers);
    return j.dump();
}

double mlp_gradient_check(const ModelSpec& spec, const Matrix& x, const std::vector<GrowthClass>& labels,
                          std::uint64_t seed, std::size_t max_parameters, double step) {
    using Mat = MlpCore<double>::Mat;
    using Vec = MlpCore<double>::Vec;

    std::vector<int> y;
    y.reserve(labels.size());
    for (auto c : labels) y.push_back(static_cast<int>(c));

    MlpCore<double> net(static_cast<int>(x.cols()), spec.hidden_layers);
    Rng rng(seed);
    net.init_glorot(rng);

    std::vector<Mat> gw;
    std::vector<Vec> gb;
    net.gradients(x, y, gw, gb);

    // Count parameters, then probe an evenly spaced sample.
    std::size_t total = 0;
    for (const auto& wl : net.w) total += static_cast<std::size_t>(wl.size());
    for (const auto& bl : net.b) total += static_cast<std::size_t>(bl.size());
    const std::size_t samples = std::min(max_parameters, total);
    const std::size_t stride = std::max<std::size_t>(1, total / samples);

    const auto param = [&](std::size_t flat) -> double* {
        for (auto& wl : net.w) {
            if (flat < static_cast<std::size_t>(wl.size())) return wl.data() + flat;
            flat -= static_cast<std::size_t>(wl.size());
        }
        for (auto& bl : net.b) {
            if (flat < static_cast<std::size_t>(bl.size())) return bl.data() + flat;
            flat -= static_cast<std::size_t>(bl.size());
        }
        return nullptr;
    };
    const auto grad_at = [&](std::size_t flat) -> double {
        for (std::size_t l = 0; l < gw.size(); ++l) {
            if (flat < static_cast<std::size_t>(gw[l].size())) return gw[l].data()[flat];
            flat -= static_cast<std::size_t>(gw[l].size());
        }
        for (std::size_t l = 0; l < gb.size(); ++l) {
            if (flat < static_cast<std::size_t>(gb[l].size())) return gb[l].data()[flat];
            flat -= static_cast<std::size_t>(gb[l].size());
        }
        throw std::logic_error("mlp_gradient_check: flat index out of range");
    };

    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t flat = s * stride;
        double* p = param(flat);
        const double saved = *p;
        *p = saved + step;
        const double lp = net.loss(x, y);
        *p = saved - step;
        const double lm = net.loss(x, y);
        *p = saved;
        const double numeric = (lp - lm) / (2.0 * step);
        const double analytic = grad_at(flat);
        const double denom = std::max({1e-10, std::fabs(numeric), std::fabs(analytic)});
        worst = std::max(worst, std::fabs(numeric - analytic) / denom);
    }
    return worst;
}

} // namespace cephgrow::models
