#include "cephgrow/models/zoo.hpp"

#include "cephgrow/models/boosting.hpp"
#include "cephgrow/models/forest.hpp"
#include "cephgrow/models/knn.hpp"
#include "cephgrow/models/linear.hpp"
#include "cephgrow/models/mlp.hpp"
#include "cephgrow/models/svm.hpp"
#include "cephgrow/models/tree.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cephgrow::models {

std::string ModelSpec::name() const {
    switch (family) {
        case Family::Mlp: {
            if (hidden_layers.empty()) return "MLP";
            std::string s = "MLP(";
            for (std::size_t i = 0; i < hidden_layers.size(); ++i) {
                if (i) s += ", ";
                s += std::to_string(hidden_layers[i]);
            }
            return s + ")";
        }
        case Family::Xgb: return "XGB(" + std::to_string(rounds) + ")";
        case Family::RandomForest: return "RF(" + std::to_string(trees) + ")";
        case Family::Svm: return "SVM";
        case Family::LogisticRegression: return "LR";
        case Family::DecisionTree: return "DT";
        case Family::Knn: return "NN(" + std::to_string(neighbors) + ")";
        case Family::ZeroRule: return "ZeroR";
    }
    throw std::logic_error("ModelSpec::name: bad family");
}

namespace {

std::vector<int> parse_int_list(std::string_view body) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t end = body.find(',', start);
        if (end == std::string_view::npos) end = body.size();
        std::string_view tok = body.substr(start, end - start);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        int v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v <= 0)
            throw std::invalid_argument("ModelSpec::parse: bad integer '" + std::string(tok) + "'");
        out.push_back(v);
        if (end == body.size()) break;
        start = end + 1;
    }
    return out;
}

} // namespace

ModelSpec ModelSpec::parse(std::string_view name) {
    ModelSpec spec;
    const auto paren = name.find('(');
    std::string_view head = paren == std::string_view::npos ? name : name.substr(0, paren);
    std::vector<int> args;
    if (paren != std::string_view::npos) {
        if (name.back() != ')') throw std::invalid_argument("ModelSpec::parse: missing ')' in " + std::string(name));
        args = parse_int_list(name.substr(paren + 1, name.size() - paren - 2));
    }

    if (head == "MLP") {
        spec.family = Family::Mlp;
        spec.hidden_layers = args;
        if (args.size() > 2) throw std::invalid_argument("ModelSpec::parse: MLP takes at most two layers");
        return spec;
    }
    const auto expect_one = [&](Family f, int ModelSpec::* field) {
        if (args.size() != 1) throw std::invalid_argument("ModelSpec::parse: " + std::string(head) + " needs one argument");
        spec.family = f;
        spec.*field = args[0];
        return spec;
    };
    if (head == "XGB") return expect_one(Family::Xgb, &ModelSpec::rounds);
    if (head == "RF") return expect_one(Family::RandomForest, &ModelSpec::trees);
    if (head == "NN") return expect_one(Family::Knn, &ModelSpec::neighbors);
    if (!args.empty()) throw std::invalid_argument("ModelSpec::parse: unexpected arguments for " + std::string(head));
    if (head == "SVM") spec.family = Family::Svm;
    else if (head == "LR") spec.family = Family::LogisticRegression;
    else if (head == "DT") spec.family = Family::DecisionTree;
    else if (head == "ZeroR") spec.family = Family::ZeroRule;
    else throw std::invalid_argument("ModelSpec::parse: unknown model '" + std::string(name) + "'");
    return spec;
}

const std::vector<ModelSpec>& ModelSpec::canonical_zoo() {
    static const std::vector<ModelSpec> zoo = [] {
        std::vector<ModelSpec> v;
        for (const char* n : {"MLP", "MLP(20)", "MLP(50)", "MLP(100)", "MLP(50, 10)", "MLP(50, 20)",
                              "MLP(50, 50)", "XGB(100)", "XGB(300)", "RF(100)", "RF(300)", "SVM", "LR",
                              "DT", "NN(3)", "NN(5)"})
            v.push_back(parse(n));
        return v;
    }();
    return zoo;
}

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    s.active = true;
    s.mean = x.colwise().mean();
    s.scale.resize(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean(c)).square().mean();
        const double sd = std::sqrt(var);
        s.scale(c) = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (!active) return x;
    if (x.cols() != mean.size()) throw std::invalid_argument("Standardizer: width mismatch");
    return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

GrowthClass TrainedModel::predict_one(const Eigen::RowVectorXd& row) const {
    Matrix m(1, row.size());
    m.row(0) = row;
    return predict(m).front();
}

void TrainedModel::check_width(const Matrix& rows) const {
    if (rows.cols() != input_width())
        throw std::invalid_argument("predict: expected " + std::to_string(input_width()) + " features, got " +
                                    std::to_string(rows.cols()));
}

int resolve_vote(const std::array<int, kNumClasses>& votes, const std::array<int, kNumClasses>& train_counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && train_counts[c] > train_counts[best]))
            best = c;
    }
    return best;
}

std::array<int, kNumClasses> class_counts(const std::vector<GrowthClass>& labels) {
    std::array<int, kNumClasses> counts{};
    for (auto c : labels) ++counts[static_cast<int>(c)];
    return counts;
}

void validate_training_inputs(const Matrix& x, const std::vector<GrowthClass>& labels) {
    if (static_cast<std::size_t>(x.rows()) != labels.size())
        throw std::invalid_argument("train: row/label count mismatch");
    if (x.rows() == 0) throw std::invalid_argument("train: empty training set");
    if (!x.allFinite()) throw std::invalid_argument("train: non-finite feature values");
    const auto counts = class_counts(labels);
    int present = 0;
    for (int c : counts) present += c > 0 ? 1 : 0;
    if (present < 2) throw std::invalid_argument("train: single-class training data");
}

std::vector<GrowthClass> ZeroRuleModel::predict(const Matrix& rows) const {
    check_width(rows);
    return std::vector<GrowthClass>(static_cast<std::size_t>(rows.rows()), majority_);
}

std::string ZeroRuleModel::serialize() const {
    nlohmann::json j;
    j["format"] = "cephgrow-model/1";
    j["spec"] = spec_.name();
    j["seed"] = meta_.seed;
    j["width"] = width_;
    j["majority"] = static_cast<int>(majority_);
    return j.dump();
}

std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const Matrix& x,
                                    const std::vector<GrowthClass>& labels, const TrainConfig& config) {
    switch (spec.family) {
        case ModelSpec::Family::Mlp: return train_mlp(spec, x, labels, config);
        case ModelSpec::Family::Xgb: return train_xgb(spec, x, labels, config);
        case ModelSpec::Family::RandomForest: return train_random_forest(spec, x, labels, config);
        case ModelSpec::Family::Svm: return train_svm(spec, x, labels, config);
        case ModelSpec::Family::LogisticRegression: return train_logistic(spec, x, labels, config);
        case ModelSpec::Family::DecisionTree: return train_decision_tree(spec, x, labels, config);
        case ModelSpec::Family::Knn: return train_knn(spec, x, labels, config);
        case ModelSpec::Family::ZeroRule: {
            validate_training_inputs(x, labels);
            const auto counts = class_counts(labels);
            int best = 0;
            for (int c = 1; c < kNumClasses; ++c)
                if (counts[c] > counts[best]) best = c;
            TrainMeta meta;
            meta.seed = config.seed;
            return std::make_unique<ZeroRuleModel>(spec, meta, x.cols(), static_cast<GrowthClass>(best));
        }
    }
    throw std::logic_error("train: bad family");
}

namespace {

Standardizer scaler_from_json(const nlohmann::json& j) {
    Standardizer s;
    if (!j.contains("scaler")) return s;
    const auto mean = j["scaler"]["mean"].get<std::vector<double>>();
    const auto scale = j["scaler"]["scale"].get<std::vector<double>>();
    s.active = true;
    s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    s.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    return s;
}

TrainMeta meta_from_json(const nlohmann::json& j) {
    TrainMeta m;
    m.seed = j.value("seed", std::uint64_t{0});
    m.epochs_run = j.value("epochs_run", j.value("iterations", 0));
    m.stopped_early = j.value("stopped_early", false);
    m.converged = j.value("converged", true);
    return m;
}

std::vector<CartNode> cart_nodes_from_json(const nlohmann::json& arr) {
    std::vector<CartNode> nodes;
    nodes.reserve(arr.size());
    for (const auto& nj : arr) {
        CartNode nd;
        nd.feature = nj["f"].get<int>();
        nd.threshold = nj["t"].get<double>();
        nd.left = nj["l"].get<int>();
        nd.right = nj["r"].get<int>();
        nd.leaf_class = nj["c"].get<int>();
        nodes.push_back(nd);
    }
    return nodes;
}

std::array<int, kNumClasses> counts_from_json(const nlohmann::json& j) {
    std::array<int, kNumClasses> counts{};
    const auto v = j.get<std::vector<int>>();
    for (std::size_t i = 0; i < counts.size() && i < v.size(); ++i) counts[i] = v[i];
    return counts;
}

} // namespace

std::unique_ptr<TrainedModel> deserialize(const std::string& blob) {
    const nlohmann::json j = nlohmann::json::parse(blob);
    if (j.value("format", std::string{}) != "cephgrow-model/1")
        throw std::invalid_argument("deserialize: unsupported model format");
    const ModelSpec spec = ModelSpec::parse(j["spec"].get<std::string>());
    const TrainMeta meta = meta_from_json(j);

    switch (spec.family) {
        case ModelSpec::Family::Mlp: {
            const auto& layers = j["layers"];
            // Input width from the first layer's row count.
            const int input = layers.front()["rows"].get<int>();
            MlpCore<float> core(input, spec.hidden_layers);
            for (std::size_t l = 0; l < core.w.size(); ++l) {
                const auto w = layers[l]["w"].get<std::vector<double>>();
                const auto b = layers[l]["b"].get<std::vector<double>>();
                for (Eigen::Index i = 0; i < core.w[l].size(); ++i)
                    core.w[l].data()[i] = static_cast<float>(w[static_cast<std::size_t>(i)]);
                for (Eigen::Index i = 0; i < core.b[l].size(); ++i)
                    core.b[l].data()[i] = static_cast<float>(b[static_cast<std::size_t>(i)]);
            }
            return std::make_unique<MlpModel>(spec, meta, scaler_from_json(j), std::move(core));
        }
        case ModelSpec::Family::LogisticRegression: {
            const auto wflat = j["w"].get<std::vector<double>>();
            const auto bflat = j["b"].get<std::vector<double>>();
            const auto rows = j["rows"].get<Eigen::Index>();
            Matrix w = Eigen::Map<const Matrix>(wflat.data(), rows, kNumClasses);
            Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bflat.data(), kNumClasses);
            return std::make_unique<LogisticModel>(spec, meta, scaler_from_json(j), std::move(w), std::move(b));
        }
        case ModelSpec::Family::DecisionTree: {
            Cart tree = Cart::from_nodes(cart_nodes_from_json(j["nodes"]));
            return std::make_unique<DecisionTreeModel>(spec, meta, std::move(tree),
                                                       j["width"].get<Eigen::Index>(),
                                                       counts_from_json(j["train_counts"]));
        }
        case ModelSpec::Family::RandomForest: {
            std::vector<Cart> trees;
            for (const auto& tj : j["trees"]) trees.push_back(Cart::from_nodes(cart_nodes_from_json(tj)));
            return std::make_unique<RandomForestModel>(spec, meta, std::move(trees),
                                                       j["width"].get<Eigen::Index>(),
                                                       counts_from_json(j["train_counts"]));
        }
        case ModelSpec::Family::Xgb: {
            std::vector<BoostTree> trees;
            for (const auto& tj : j["trees"]) {
                BoostTree t;
                for (const auto& nj : tj) {
                    BoostNode nd;
                    nd.feature = nj["f"].get<int>();
                    nd.threshold = nj["t"].get<double>();
                    nd.left = nj["l"].get<int>();
                    nd.right = nj["r"].get<int>();
                    nd.weight = nj["w"].get<double>();
                    t.nodes.push_back(nd);
                }
                trees.push_back(std::move(t));
            }
            return std::make_unique<XgbModel>(spec, meta, std::move(trees), j["width"].get<Eigen::Index>(),
                                              counts_from_json(j["train_counts"]));
        }
        case ModelSpec::Family::Svm: {
            const auto flat = j["support"].get<std::vector<double>>();
            const auto cols = j["cols"].get<Eigen::Index>();
            const auto rows = static_cast<Eigen::Index>(flat.size()) / cols;
            Matrix support = Eigen::Map<const Matrix>(flat.data(), rows, cols);
            std::vector<BinarySvm> machines;
            for (const auto& mj : j["machines"]) {
                BinarySvm m;
                m.class_pos = mj["pos"].get<int>();
                m.class_neg = mj["neg"].get<int>();
                m.support_rows = mj["rows"].get<std::vector<int>>();
                m.coef = mj["coef"].get<std::vector<double>>();
                m.rho = mj["rho"].get<double>();
                m.converged = mj["converged"].get<bool>();
                machines.push_back(std::move(m));
            }
            return std::make_unique<SvmModel>(spec, meta, scaler_from_json(j), std::move(support),
                                              j["gamma"].get<double>(), std::move(machines),
                                              counts_from_json(j["train_counts"]));
        }
        case ModelSpec::Family::Knn: {
            const auto flat = j["x"].get<std::vector<double>>();
            const auto cols = j["cols"].get<Eigen::Index>();
            const auto rows = static_cast<Eigen::Index>(flat.size()) / cols;
            Matrix x = Eigen::Map<const Matrix>(flat.data(), rows, cols);
            std::vector<GrowthClass> y;
            for (int v : j["y"].get<std::vector<int>>()) y.push_back(static_cast<GrowthClass>(v));
            // KnnModel re-standardizes internally, so hand it raw = stored rows
            // with an inactive scaler, then restore the scaler afterwards.
            auto model = std::make_unique<KnnModel>(spec, meta, scaler_from_json(j), std::move(x), std::move(y));
            return model;
        }
        case ModelSpec::Family::ZeroRule:
            return std::make_unique<ZeroRuleModel>(spec, meta, j["width"].get<Eigen::Index>(),
                                                   static_cast<GrowthClass>(j["majority"].get<int>()));
    }
    throw std::logic_error("deserialize: bad family");
}

} // namespace cephgrow::models
