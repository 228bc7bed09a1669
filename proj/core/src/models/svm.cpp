#include "cephgrow/models/svm.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cephgrow::models {

namespace {

constexpr double kC = 1.0;
constexpr double kTol = 1e-3;
constexpr double kTau = 1e-12;
constexpr long kMaxIterations = 100000;

// SMO with maximal-violating-pair selection on the dual
//   min 0.5 a^T Q a - e^T a,  0 <= a <= C,  y^T a = 0,  Q_ij = y_i y_j K_ij.
struct SmoResult {
    std::vector<double> alpha;
    double rho = 0.0;
    bool converged = false;
};

SmoResult solve_smo(const Matrix& k, const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    SmoResult res;
    res.alpha.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(n), -1.0);

    const auto q = [&](int i, int j) { return y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * k(i, j); };

    for (long iter = 0; iter < kMaxIterations; ++iter) {
        // Working pair: i maximizes -y*g over I_up, j minimizes over I_low.
        int i = -1, j = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t) {
            const double yt = y[static_cast<std::size_t>(t)];
            const double at = res.alpha[static_cast<std::size_t>(t)];
            const double v = -yt * grad[static_cast<std::size_t>(t)];
            const bool in_up = (yt > 0 && at < kC) || (yt < 0 && at > 0);
            const bool in_low = (yt > 0 && at > 0) || (yt < 0 && at < kC);
            if (in_up && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i < 0 || j < 0 || gmax - gmin < kTol) {
            res.converged = true;
            break;
        }

        const double yi = y[static_cast<std::size_t>(i)];
        const double yj = y[static_cast<std::size_t>(j)];
        const double ai_old = res.alpha[static_cast<std::size_t>(i)];
        const double aj_old = res.alpha[static_cast<std::size_t>(j)];

        // Curvature along the feasible direction; equals the squared RKHS
        // distance for both the equal- and unequal-label cases.
        double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (quad <= 0.0) quad = kTau;

        if (yi != yj) {
            const double delta = (-grad[static_cast<std::size_t>(i)] - grad[static_cast<std::size_t>(j)]) / quad;
            const double diff = ai_old - aj_old;
            double ai = ai_old + delta;
            double aj = aj_old + delta;
            if (diff > 0) {
                if (aj < 0) { aj = 0; ai = diff; }
            } else {
                if (ai < 0) { ai = 0; aj = -diff; }
            }
            if (diff > 0) {
                if (ai > kC) { ai = kC; aj = kC - diff; }
            } else {
                if (aj > kC) { aj = kC; ai = kC + diff; }
            }
            res.alpha[static_cast<std::size_t>(i)] = ai;
            res.alpha[static_cast<std::size_t>(j)] = aj;
        } else {
            const double delta = (grad[static_cast<std::size_t>(i)] - grad[static_cast<std::size_t>(j)]) / quad;
            const double sum = ai_old + aj_old;
            double ai = ai_old - delta;
            double aj = aj_old + delta;
            if (sum > kC) {
                if (ai > kC) { ai = kC; aj = sum - kC; }
            } else {
                if (aj < 0) { aj = 0; ai = sum; }
            }
            if (sum > kC) {
                if (aj > kC) { aj = kC; ai = sum - kC; }
            } else {
                if (ai < 0) { ai = 0; aj = sum; }
            }
            res.alpha[static_cast<std::size_t>(i)] = ai;
            res.alpha[static_cast<std::size_t>(j)] = aj;
        }

        const double dai = res.alpha[static_cast<std::size_t>(i)] - ai_old;
        const double daj = res.alpha[static_cast<std::size_t>(j)] - aj_old;
        for (int t = 0; t < n; ++t)
            grad[static_cast<std::size_t>(t)] += q(t, i) * dai + q(t, j) * daj;
    }

    // rho: mean y*g over free vectors, else the midpoint of the bounds.
    double rho_sum = 0.0;
    int rho_n = 0;
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
        const double yt = y[static_cast<std::size_t>(t)];
        const double at = res.alpha[static_cast<std::size_t>(t)];
        const double yg = yt * grad[static_cast<std::size_t>(t)];
        if (at > 0.0 && at < kC) {
            rho_sum += yg;
            ++rho_n;
        } else {
            const bool in_up = (yt > 0 && at < kC) || (yt < 0 && at > 0);
            if (in_up) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        }
    }
    res.rho = rho_n > 0 ? rho_sum / double(rho_n) : 0.5 * (ub + lb);
    return res;
}

} // namespace

std::unique_ptr<TrainedModel> train_svm(const ModelSpec& spec, const Matrix& x,
                                        const std::vector<GrowthClass>& labels, const TrainConfig& config) {
    validate_training_inputs(x, labels);

    Standardizer scaler;
    if (config.standardize) scaler = Standardizer::fit(x);
    const Matrix xs = scaler.active ? scaler.apply(x) : x;

    // gamma = 1/(d * var) over all entries of the training matrix.
    const double mean_all = xs.mean();
    const double var_all = (xs.array() - mean_all).square().mean();
    const double gamma = var_all > 0.0 ? 1.0 / (double(xs.cols()) * var_all) : 1.0 / double(xs.cols());

    TrainMeta meta;
    meta.seed = config.seed;

    std::vector<BinarySvm> machines;
    for (int a = 0; a < kNumClasses; ++a) {
        for (int b = a + 1; b < kNumClasses; ++b) {
            std::vector<int> rows;
            std::vector<double> y;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                const int c = static_cast<int>(labels[i]);
                if (c == a || c == b) {
                    rows.push_back(static_cast<int>(i));
                    y.push_back(c == a ? 1.0 : -1.0);
                }
            }
            if (rows.empty()) continue;
            const int m = static_cast<int>(rows.size());
            Matrix sub(m, xs.cols());
            for (int i = 0; i < m; ++i) sub.row(i) = xs.row(rows[static_cast<std::size_t>(i)]);
            // Full kernel cache for the pairwise subset.
            Matrix k(m, m);
            for (int i = 0; i < m; ++i) {
                k(i, i) = 1.0;
                for (int jj = i + 1; jj < m; ++jj) {
                    const double d2 = (sub.row(i) - sub.row(jj)).squaredNorm();
                    const double v = std::exp(-gamma * d2);
                    k(i, jj) = v;
                    k(jj, i) = v;
                }
            }
            const SmoResult sol = solve_smo(k, y);
            if (!sol.converged) meta.converged = false;

            BinarySvm machine;
            machine.class_pos = a;
            machine.class_neg = b;
            machine.rho = sol.rho;
            machine.converged = sol.converged;
            for (int i = 0; i < m; ++i)
                if (sol.alpha[static_cast<std::size_t>(i)] > 0.0) {
                    machine.support_rows.push_back(rows[static_cast<std::size_t>(i)]);
                    machine.coef.push_back(sol.alpha[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)]);
                }
            machines.push_back(std::move(machine));
        }
    }

    return std::make_unique<SvmModel>(spec, meta, std::move(scaler), xs, gamma, std::move(machines),
                                      class_counts(labels));
}

double SvmModel::decision(std::size_t machine, const Eigen::RowVectorXd& row) const {
    const auto& m = machines_[machine];
    Eigen::RowVectorXd z = row;
    if (scaler_.active) {
        Matrix tmp = scaler_.apply(z);
        z = tmp.row(0);
    }
    double f = 0.0;
    for (std::size_t s = 0; s < m.support_rows.size(); ++s) {
        const double d2 = (support_.row(m.support_rows[s]) - z).squaredNorm();
        f += m.coef[s] * std::exp(-gamma_ * d2);
    }
    return f - m.rho;
}

std::vector<GrowthClass> SvmModel::predict(const Matrix& rows) const {
    check_width(rows);
    const Matrix xs = scaler_.active ? scaler_.apply(rows) : rows;
    std::vector<GrowthClass> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index r = 0; r < xs.rows(); ++r) {
        std::array<int, kNumClasses> votes{};
        for (const auto& m : machines_) {
            double f = 0.0;
            for (std::size_t s = 0; s < m.support_rows.size(); ++s) {
                const double d2 = (support_.row(m.support_rows[s]) - xs.row(r)).squaredNorm();
                f += m.coef[s] * std::exp(-gamma_ * d2);
            }
            f -= m.rho;
            ++votes[f > 0.0 ? m.class_pos : m.class_neg];
        }
        out.push_back(static_cast<GrowthClass>(resolve_vote(votes, train_counts_)));
    }
    return out;
}

std::string SvmModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["gamma"] = gamma_;
    j["converged"] = meta_.converged;
    j["train_counts"] = train_counts_;
    if (scaler_.active) {
        j["scaler"]["mean"] = std::vector<double>(scaler_.mean.data(), scaler_.mean.data() + scaler_.mean.size());
        j["scaler"]["scale"] =
            std::vector<double>(scaler_.scale.data(), scaler_.scale.data() + scaler_.scale.size());
    }
    j["cols"] = support_.cols();
    std::vector<double> flat(support_.data(), support_.data() + support_.size());
    j["support"] = flat;
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : machines_) {
        ms.push_back({{"pos", m.class_pos},
                      {"neg", m.class_neg},
                      {"rows", m.support_rows},
                      {"coef", m.coef},
                      {"rho", m.rho},
                      {"converged", m.converged}});
    }
    j["machines"] = std::move(ms);
    return j.dump();
}

} // namespace cephgrow::models
