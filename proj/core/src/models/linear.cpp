#include "cephgrow/models/linear.hpp"

#include "json.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace cephgrow::models {

namespace {

struct Objective {
    const Matrix& x;
    const std::vector<int>& y;
    double l2; // 1 / (C * n) with C = 1

    // Parameters flattened as [W column-major (d*k), b (k)].
    double eval(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
        const Eigen::Index d = x.cols();
        const Eigen::Index n = x.rows();
        const Eigen::Index k = kNumClasses;
        const Eigen::Map<const Matrix> w(theta.data(), d, k);
        const Eigen::Map<const Eigen::VectorXd> b(theta.data() + d * k, k);

        Matrix z = (x * w).rowwise() + b.transpose();
        double loss = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            const double zmax = z.row(r).maxCoeff();
            const double lse = zmax + std::log((z.row(r).array() - zmax).exp().sum());
            loss += lse - z(r, y[static_cast<std::size_t>(r)]);
            z.row(r) = (z.row(r).array() - lse).exp(); // now probabilities
            z(r, y[static_cast<std::size_t>(r)]) -= 1.0;
        }
        loss /= double(n);
        loss += 0.5 * l2 * w.squaredNorm();

        grad.resize(theta.size());
        Eigen::Map<Matrix> gw(grad.data(), d, k);
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + d * k, k);
        gw = x.transpose() * z / double(n) + l2 * w;
        gb = z.colwise().sum().transpose() / double(n);
        return loss;
    }
};

// Compact L-BFGS (memory 10) with Armijo backtracking.
int lbfgs_minimize(const Objective& obj, Eigen::VectorXd& theta, int max_iterations, bool& converged) {
    constexpr int kMemory = 10;
    constexpr double kGradTol = 1e-7;
    constexpr double kArmijo = 1e-4;

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    Eigen::VectorXd grad;
    double f = obj.eval(theta, grad);
    converged = false;

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() < kGradTol) {
            converged = true;
            break;
        }
        // Two-loop recursion.
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& yv = y_hist.back();
            q *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;
        double dg = grad.dot(dir);
        if (dg >= 0.0) { // fall back to steepest descent
            dir = -grad;
            dg = -grad.squaredNorm();
        }

        double step = 1.0;
        Eigen::VectorXd theta_new;
        Eigen::VectorXd grad_new;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            theta_new = theta + step * dir;
            f_new = obj.eval(theta_new, grad_new);
            if (f_new <= f + kArmijo * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // line search stalled at machine precision

        Eigen::VectorXd s = theta_new - theta;
        Eigen::VectorXd yv = grad_new - grad;
        const double sy = s.dot(yv);
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > kMemory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        theta = std::move(theta_new);
        grad = std::move(grad_new);
        f = f_new;
    }
    return iter;
}

} // namespace

std::unique_ptr<TrainedModel> train_logistic(const ModelSpec& spec, const Matrix& x,
                                             const std::vector<GrowthClass>& labels,
                                             const TrainConfig& config) {
    validate_training_inputs(x, labels);

    Standardizer scaler;
    if (config.standardize) scaler = Standardizer::fit(x);
    const Matrix xs = scaler.active ? scaler.apply(x) : x;

    std::vector<int> y;
    y.reserve(labels.size());
    for (auto c : labels) y.push_back(static_cast<int>(c));

    const Objective obj{xs, y, 1.0 / double(xs.rows())};
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(xs.cols() * kNumClasses + kNumClasses);

    TrainMeta meta;
    meta.seed = config.seed;
    meta.epochs_run = lbfgs_minimize(obj, theta, config.lr_max_iterations, meta.converged);

    Matrix w = Eigen::Map<Matrix>(theta.data(), xs.cols(), kNumClasses);
    Eigen::VectorXd b = theta.tail(kNumClasses);
    return std::make_unique<LogisticModel>(spec, meta, std::move(scaler), std::move(w), std::move(b));
}

std::vector<GrowthClass> LogisticModel::predict(const Matrix& rows) const {
    check_width(rows);
    const Matrix xs = scaler_.active ? scaler_.apply(rows) : rows;
    const Matrix z = (xs * weights_).rowwise() + bias_.transpose();
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(z.rows()));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        Eigen::Index best = 0;
        z.row(r).maxCoeff(&best);
        out.push_back(static_cast<GrowthClass>(best));
    }
    return out;
}

std::string LogisticModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["iterations"] = meta_.epochs_run;
    j["converged"] = meta_.converged;
    if (scaler_.active) {
        j["scaler"]["mean"] = std::vector<double>(scaler_.mean.data(), scaler_.mean.data() + scaler_.mean.size());
        j["scaler"]["scale"] =
            std::vector<double>(scaler_.scale.data(), scaler_.scale.data() + scaler_.scale.size());
    }
    std::vector<double> wflat(weights_.data(), weights_.data() + weights_.size());
    j["rows"] = weights_.rows();
    j["w"] = wflat;
    j["b"] = std::vector<double>(bias_.data(), bias_.data() + bias_.size());
    return j.dump();
}

} // namespace cephgrow::models
