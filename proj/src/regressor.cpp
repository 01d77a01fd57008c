#include "gaze3d/regressor.hpp"

#include "gaze3d/errors.hpp"
#include "json.hpp"

namespace gaze3d {

using nlohmann::json;

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::LR: return "LR";
        case ModelKind::BR: return "BR";
        case ModelKind::ENet: return "ENet";
        case ModelKind::SVR: return "SVR";
        case ModelKind::GBR: return "GBR";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    for (ModelKind k : kAllModelKinds) {
        if (name == model_kind_name(k)) return k;
    }
    throw ConfigInvalid("unknown model kind: " + name);
}

ModelKind AnyModel::kind() const {
    return static_cast<ModelKind>(model_.index());
}

double AnyModel::predict(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict(x); }, model_);
}

namespace {

json linear_to_json(const std::vector<double>& coef, double intercept) {
    return {{"coef", coef}, {"intercept", intercept}};
}

json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
    return m;
}

json tree_to_json(const RegressionTree& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes()) {
        nodes.push_back({n.feature, n.threshold, n.value, n.left, n.right});
    }
    return nodes;
}

RegressionTree tree_from_json(const json& j) {
    std::vector<RegressionTree::Node> nodes;
    for (const auto& n : j) {
        RegressionTree::Node node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.value = n.at(2).get<double>();
        node.left = n.at(3).get<int>();
        node.right = n.at(4).get<int>();
        nodes.push_back(node);
    }
    return RegressionTree::from_nodes(std::move(nodes));
}

}  // namespace

std::string AnyModel::to_json() const {
    json j;
    j["kind"] = model_kind_name(kind());
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LinModel>) {
                j["params"] = linear_to_json(m.coef, m.intercept);
                j["params"]["used_fallback"] = m.used_fallback;
            } else if constexpr (std::is_same_v<T, BrModel>) {
                j["params"] = linear_to_json(m.coef, m.intercept);
                j["params"]["alpha"] = m.alpha;
                j["params"]["lambda"] = m.lambda;
            } else if constexpr (std::is_same_v<T, EnetModel>) {
                j["params"] = linear_to_json(m.coef, m.intercept);
                j["config"] = {{"alpha", m.config.alpha},
                               {"l1_ratio", m.config.l1_ratio},
                               {"max_iter", m.config.max_iter},
                               {"tol", m.config.tol}};
            } else if constexpr (std::is_same_v<T, SvrModel>) {
                j["config"] = {{"C", m.config.C},
                               {"epsilon_tube", m.config.epsilon_tube},
                               {"kernel", m.config.kernel.type == KernelSpec::Type::Rbf
                                              ? "rbf"
                                              : "linear"},
                               {"sigma", m.config.kernel.sigma},
                               {"max_iter", m.config.max_iter},
                               {"tol", m.config.tol}};
                j["params"] = {{"support_vectors", matrix_to_json(m.support_vectors)},
                               {"weights", m.weights},
                               {"bias", m.bias},
                               {"feat_mean", m.feat_mean},
                               {"feat_scale", m.feat_scale},
                               {"converged", m.converged},
                               {"iterations", m.iterations}};
            } else if constexpr (std::is_same_v<T, GbrModel>) {
                j["config"] = {{"n_trees", m.config.n_trees},
                               {"max_depth", m.config.max_depth},
                               {"learning_rate", m.config.learning_rate},
                               {"min_samples_leaf", m.config.min_samples_leaf}};
                json trees = json::array();
                for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
                j["params"] = {{"initial", m.initial}, {"trees", trees}};
            }
        },
        model_);
    return j.dump();
}

AnyModel AnyModel::from_json(const std::string& text) {
    const json j = json::parse(text);
    const ModelKind kind = model_kind_from_name(j.at("kind").get<std::string>());
    const json& p = j.at("params");
    switch (kind) {
        case ModelKind::LR: {
            LinModel m;
            m.coef = p.at("coef").get<std::vector<double>>();
            m.intercept = p.at("intercept").get<double>();
            m.used_fallback = p.value("used_fallback", false);
            return AnyModel{m};
        }
        case ModelKind::BR: {
            BrModel m;
            m.coef = p.at("coef").get<std::vector<double>>();
            m.intercept = p.at("intercept").get<double>();
            m.alpha = p.value("alpha", 0.0);
            m.lambda = p.value("lambda", 0.0);
            return AnyModel{m};
        }
        case ModelKind::ENet: {
            EnetModel m;
            m.coef = p.at("coef").get<std::vector<double>>();
            m.intercept = p.at("intercept").get<double>();
            const json& c = j.at("config");
            m.config.alpha = c.at("alpha").get<double>();
            m.config.l1_ratio = c.at("l1_ratio").get<double>();
            m.config.max_iter = c.at("max_iter").get<int>();
            m.config.tol = c.at("tol").get<double>();
            return AnyModel{m};
        }
        case ModelKind::SVR: {
            SvrModel m;
            const json& c = j.at("config");
            m.config.C = c.at("C").get<double>();
            m.config.epsilon_tube = c.at("epsilon_tube").get<double>();
            m.config.kernel.type = c.at("kernel").get<std::string>() == "rbf"
                                       ? KernelSpec::Type::Rbf
                                       : KernelSpec::Type::Linear;
            m.config.kernel.sigma = c.at("sigma").get<double>();
            m.config.max_iter = c.at("max_iter").get<int>();
            m.config.tol = c.at("tol").get<double>();
            m.support_vectors = matrix_from_json(p.at("support_vectors"));
            m.weights = p.at("weights").get<std::vector<double>>();
            m.bias = p.at("bias").get<double>();
            m.feat_mean = p.at("feat_mean").get<std::vector<double>>();
            m.feat_scale = p.at("feat_scale").get<std::vector<double>>();
            m.converged = p.at("converged").get<bool>();
            m.iterations = p.at("iterations").get<int>();
            return AnyModel{m};
        }
        case ModelKind::GBR: {
            GbrModel m;
            const json& c = j.at("config");
            m.config.n_trees = c.at("n_trees").get<int>();
            m.config.max_depth = c.at("max_depth").get<int>();
            m.config.learning_rate = c.at("learning_rate").get<double>();
            m.config.min_samples_leaf = c.at("min_samples_leaf").get<int>();
            m.initial = p.at("initial").get<double>();
            for (const auto& t : p.at("trees")) m.trees.push_back(tree_from_json(t));
            return AnyModel{m};
        }
    }
    throw ConfigInvalid("unreachable model kind");
}

AnyModel fit_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                   const ModelConfigs& cfg) {
    switch (kind) {
        case ModelKind::LR: return AnyModel{lr_fit(X, y, cfg.lr)};
        case ModelKind::BR: return AnyModel{br_fit(X, y, cfg.br)};
        case ModelKind::ENet: return AnyModel{enet_fit(X, y, cfg.enet)};
        case ModelKind::SVR: return AnyModel{svr_fit(X, y, cfg.svr)};
        case ModelKind::GBR: return AnyModel{gbr_fit(X, y, cfg.gbr)};
    }
    throw ConfigInvalid("unreachable model kind");
}

}  // namespace gaze3d
