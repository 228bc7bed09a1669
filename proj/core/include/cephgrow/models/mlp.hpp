#pragma once

#include "cephgrow/models/common.hpp"
#include "cephgrow/rng.hpp"

#include <cmath>
#include <vector>

namespace cephgrow::models {

// Dense feed-forward core: ReLU hidden layers, softmax output, mean
// cross-entropy loss. Templated on the scalar so the training path can run
// in float while the finite-difference gradient check runs in double.
template <typename Scalar>
class MlpCore {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    MlpCore(int input_dim, const std::vector<int>& hidden, int n_classes = kNumClasses) {
        std::vector<int> sizes;
        sizes.push_back(input_dim);
        for (int h : hidden) sizes.push_back(h);
        sizes.push_back(n_classes);
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            w.emplace_back(Mat::Zero(sizes[l], sizes[l + 1]));
            b.emplace_back(Vec::Zero(sizes[l + 1]));
        }
    }

    // Glorot uniform weights, zero biases.
    void init_glorot(Rng& rng) {
        for (auto& wl : w) {
            const double limit = std::sqrt(6.0 / double(wl.rows() + wl.cols()));
            for (Eigen::Index c = 0; c < wl.cols(); ++c)
                for (Eigen::Index r = 0; r < wl.rows(); ++r)
                    wl(r, c) = static_cast<Scalar>(rng.uniform(-limit, limit));
        }
        for (auto& bl : b) bl.setZero();
    }

    std::size_t layer_count() const { return w.size(); }

    Mat logits(const Mat& x) const {
        Mat a = x;
        for (std::size_t l = 0; l < w.size(); ++l) {
            Mat z = (a * w[l]).rowwise() + b[l].transpose();
            if (l + 1 < w.size()) z = z.cwiseMax(Scalar(0));
            a = std::move(z);
        }
        return a;
    }

    Mat probabilities(const Mat& x) const {
        Mat z = logits(x);
        for (Eigen::Index r = 0; r < z.rows(); ++r) {
            const Scalar zmax = z.row(r).maxCoeff();
            z.row(r) = (z.row(r).array() - zmax).exp();
            z.row(r) /= z.row(r).sum();
        }
        return z;
    }

    Scalar loss(const Mat& x, const std::vector<int>& y) const {
        Mat z = logits(x);
        Scalar total = 0;
        for (Eigen::Index r = 0; r < z.rows(); ++r) {
            const Scalar zmax = z.row(r).maxCoeff();
            const Scalar lse = zmax + std::log((z.row(r).array() - zmax).exp().sum());
            total += lse - z(r, y[static_cast<std::size_t>(r)]);
        }
        return total / Scalar(z.rows());
    }

    void gradients(const Mat& x, const std::vector<int>& y, std::vector<Mat>& gw,
                   std::vector<Vec>& gb) const {
        const std::size_t layers = w.size();
        std::vector<Mat> activ(layers + 1);
        activ[0] = x;
        for (std::size_t l = 0; l < layers; ++l) {
            Mat z = (activ[l] * w[l]).rowwise() + b[l].transpose();
            if (l + 1 < layers) z = z.cwiseMax(Scalar(0));
            activ[l + 1] = std::move(z);
        }
        // Softmax + CE: delta = (p - onehot) / n.
        Mat delta = activ[layers];
        for (Eigen::Index r = 0; r < delta.rows(); ++r) {
            const Scalar zmax = delta.row(r).maxCoeff();
            delta.row(r) = (delta.row(r).array() - zmax).exp();
            delta.row(r) /= delta.row(r).sum();
            delta(r, y[static_cast<std::size_t>(r)]) -= Scalar(1);
        }
        delta /= Scalar(x.rows());

        gw.resize(layers);
        gb.resize(layers);
        for (std::size_t l = layers; l-- > 0;) {
            gw[l] = activ[l].transpose() * delta;
            gb[l] = delta.colwise().sum().transpose();
            if (l > 0) {
                Mat back = delta * w[l].transpose();
                // ReLU mask from the post-activation values.
                delta = back.cwiseProduct(
                    (activ[l].array() > Scalar(0)).template cast<Scalar>().matrix());
            }
        }
    }

    std::vector<Mat> w;
    std::vector<Vec> b;
};

class MlpModel final : public TrainedModel {
public:
    MlpModel(ModelSpec spec, TrainMeta meta, Standardizer scaler, MlpCore<float> core)
        : spec_(std::move(spec)), meta_(meta), scaler_(std::move(scaler)), core_(std::move(core)) {}

    const ModelSpec& spec() const override { return spec_; }
    const TrainMeta& meta() const override { return meta_; }
    Eigen::Index input_width() const override { return core_.w.front().rows(); }
    std::vector<GrowthClass> predict(const Matrix& rows) const override;
    std::string serialize() const override;

    // Row-wise class probabilities (softmax outputs).
    Matrix probabilities(const Matrix& rows) const;
    const MlpCore<float>& core() const { return core_; }
    const Standardizer& scaler() const { return scaler_; }

private:
    ModelSpec spec_;
    TrainMeta meta_;
    Standardizer scaler_;
    MlpCore<float> core_;
};

std::unique_ptr<TrainedModel> train_mlp(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels,
                                        const TrainConfig& config);

// Max relative deviation between analytic and central finite-difference
// gradients (double precision core, step 1e-5, up to `max_parameters`
// sampled parameters).
double mlp_gradient_check(const ModelSpec& spec, const Matrix& x, const std::vector<GrowthClass>& labels,
                          std::uint64_t seed = 0, std::size_t max_parameters = 50, double step = 1e-5);

} // namespace cephgrow::models
