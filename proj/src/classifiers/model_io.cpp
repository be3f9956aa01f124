#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"
#include "uqlearn/weights.hpp"

// CMDL model container: FZWT framing with magic "CMDL" and float64 payloads
// (dtype code 1) so fitted parameters round-trip exactly.

namespace uqlearn {

namespace {

NamedTensor f64(std::vector<double> values, std::vector<uint32_t> shape = {}) {
    NamedTensor t;
    t.dtype = 1;
    t.shape = shape.empty() ? std::vector<uint32_t>{static_cast<uint32_t>(values.size())} : shape;
    t.values = std::move(values);
    uint64_t total = 1;
    for (uint32_t d : t.shape) total *= d;
    if (total != t.values.size()) throw ShapeError("model io: tensor shape mismatch");
    return t;
}

NamedTensor scalar(double v) { return f64({v}); }

Matrix as_matrix(const NamedTensor& t, const std::string& name) {
    if (t.shape.size() != 2) throw FormatError("model io: \"" + name + "\" must be rank 2");
    return Matrix(t.shape[0], t.shape[1], t.values);
}

const NamedTensor& need(const std::map<std::string, NamedTensor>& tensors,
                        const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw FormatError("model io: missing tensor \"" + name + "\"");
    return it->second;
}

double need_scalar(const std::map<std::string, NamedTensor>& tensors, const std::string& name) {
    const NamedTensor& t = need(tensors, name);
    if (t.values.size() != 1) throw FormatError("model io: \"" + name + "\" must be a scalar");
    return t.values[0];
}

std::vector<int> to_ints(const std::vector<double>& values) {
    std::vector<int> out(values.size());
    for (size_t i = 0; i < values.size(); ++i) out[i] = static_cast<int>(std::llround(values[i]));
    return out;
}

std::vector<double> from_ints(const std::vector<int>& values) {
    return std::vector<double>(values.begin(), values.end());
}

} // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    std::map<std::string, NamedTensor> t;
    t["meta"] = f64({static_cast<double>(static_cast<uint8_t>(model.kind())),
                     static_cast<double>(model.input_dim())});

    switch (model.kind()) {
    case ClassifierKind::knn: {
        const auto& m = dynamic_cast<const KnnModel&>(model);
        t["knn.x"] = f64(m.train_x().data(), {static_cast<uint32_t>(m.train_x().rows()),
                                              static_cast<uint32_t>(m.train_x().cols())});
        t["knn.labels"] = f64(from_ints(m.labels()));
        t["knn.k"] = scalar(m.k());
        t["knn.p"] = scalar(m.p());
        break;
    }
    case ClassifierKind::linear_svm: {
        const auto& m = dynamic_cast<const LinearSvmModel&>(model);
        t["svm.w"] = f64(m.weights());
        t["svm.b"] = scalar(m.bias());
        break;
    }
    case ClassifierKind::rbf_svm: {
        const auto& m = dynamic_cast<const RbfSvmModel&>(model);
        t["rsvm.sv"] = f64(m.support_x().data(), {static_cast<uint32_t>(m.support_x().rows()),
                                                  static_cast<uint32_t>(m.support_x().cols())});
        t["rsvm.coef"] = f64(m.coef());
        t["rsvm.b"] = scalar(m.bias());
        t["rsvm.sigma"] = scalar(m.sigma());
        t["rsvm.unsquared"] = scalar(m.unsquared() ? 1.0 : 0.0);
        break;
    }
    case ClassifierKind::gp: {
        const auto& m = dynamic_cast<const GpModel&>(model);
        t["gp.x"] = f64(m.train_x().data(), {static_cast<uint32_t>(m.train_x().rows()),
                                             static_cast<uint32_t>(m.train_x().cols())});
        t["gp.grad"] = f64(m.grad());
        t["gp.sigma"] = scalar(m.sigma());
        t["gp.unsquared"] = scalar(m.unsquared() ? 1.0 : 0.0);
        break;
    }
    case ClassifierKind::mlp: {
        const auto& m = dynamic_cast<const MlpModel&>(model);
        t["mlp.hidden"] = scalar(static_cast<double>(m.net().hidden_units()));
        t["mlp.params"] = f64(m.net().params());
        break;
    }
    case ClassifierKind::random_forest: {
        const auto& m = dynamic_cast<const ForestModel&>(model);
        t["rf.count"] = scalar(static_cast<double>(m.trees().size()));
        for (size_t i = 0; i < m.trees().size(); ++i) {
            const auto& nodes = m.trees()[i].nodes;
            std::vector<double> packed;
            packed.reserve(nodes.size() * 5);
            for (const TreeNode& nd : nodes) {
                packed.push_back(nd.feature);
                packed.push_back(nd.threshold);
                packed.push_back(nd.left);
                packed.push_back(nd.right);
                packed.push_back(nd.label);
            }
            t["rf.tree" + std::to_string(i)] =
                f64(std::move(packed), {static_cast<uint32_t>(nodes.size()), 5});
        }
        break;
    }
    case ClassifierKind::adaboost: {
        const auto& m = dynamic_cast<const AdaBoostModel&>(model);
        std::vector<double> packed;
        packed.reserve(m.stumps().size() * 3);
        for (const Stump& s : m.stumps()) {
            packed.push_back(s.feature);
            packed.push_back(s.threshold);
            packed.push_back(s.polarity);
        }
        t["ada.stumps"] =
            f64(std::move(packed), {static_cast<uint32_t>(m.stumps().size()), 3});
        t["ada.alphas"] = f64(m.alphas());
        break;
    }
    case ClassifierKind::gnb: {
        const auto& m = dynamic_cast<const GnbModel&>(model);
        t["gnb.prior"] = f64(m.prior());
        t["gnb.mean"] = f64(m.mean().data(), {2, static_cast<uint32_t>(m.mean().cols())});
        t["gnb.var"] = f64(m.var().data(), {2, static_cast<uint32_t>(m.var().cols())});
        break;
    }
    }
    write_container(path, "CMDL", t);
}

std::unique_ptr<TrainedModel> load_model(const std::string& path) {
    const std::map<std::string, NamedTensor> t = read_container(path, "CMDL", /*max_dtype=*/1);
    const NamedTensor& meta = need(t, "meta");
    if (meta.values.size() != 2) throw FormatError("model io: malformed meta tensor");
    const auto kind = static_cast<ClassifierKind>(static_cast<uint8_t>(meta.values[0]));
    const size_t input_dim = static_cast<size_t>(meta.values[1]);

    switch (kind) {
    case ClassifierKind::knn:
        return std::make_unique<KnnModel>(
            as_matrix(need(t, "knn.x"), "knn.x"), to_ints(need(t, "knn.labels").values),
            static_cast<int>(need_scalar(t, "knn.k")), need_scalar(t, "knn.p"));
    case ClassifierKind::linear_svm:
        return std::make_unique<LinearSvmModel>(need(t, "svm.w").values, need_scalar(t, "svm.b"),
                                                std::vector<double>{});
    case ClassifierKind::rbf_svm:
        return std::make_unique<RbfSvmModel>(
            as_matrix(need(t, "rsvm.sv"), "rsvm.sv"), need(t, "rsvm.coef").values,
            need_scalar(t, "rsvm.b"), need_scalar(t, "rsvm.sigma"),
            need_scalar(t, "rsvm.unsquared") != 0.0);
    case ClassifierKind::gp:
        return std::make_unique<GpModel>(as_matrix(need(t, "gp.x"), "gp.x"),
                                         need(t, "gp.grad").values, need_scalar(t, "gp.sigma"),
                                         need_scalar(t, "gp.unsquared") != 0.0);
    case ClassifierKind::mlp: {
        MlpNet net(input_dim, static_cast<size_t>(need_scalar(t, "mlp.hidden")));
        const NamedTensor& params = need(t, "mlp.params");
        if (params.values.size() != net.params().size())
            throw FormatError("model io: mlp parameter count mismatch");
        net.params() = params.values;
        return std::make_unique<MlpModel>(std::move(net));
    }
    case ClassifierKind::random_forest: {
        const size_t count = static_cast<size_t>(need_scalar(t, "rf.count"));
        std::vector<DecisionTree> trees(count);
        for (size_t i = 0; i < count; ++i) {
            const std::string name = "rf.tree" + std::to_string(i);
            const NamedTensor& packed = need(t, name);
            if (packed.shape.size() != 2 || packed.shape[1] != 5)
                throw FormatError("model io: \"" + name + "\" must be (nodes, 5)");
            for (size_t r = 0; r < packed.shape[0]; ++r) {
                const double* row = packed.values.data() + r * 5;
                trees[i].nodes.push_back({static_cast<int>(std::llround(row[0])), row[1],
                                          static_cast<int>(std::llround(row[2])),
                                          static_cast<int>(std::llround(row[3])),
                                          static_cast<int>(std::llround(row[4]))});
            }
        }
        return std::make_unique<ForestModel>(input_dim, std::move(trees));
    }
    case ClassifierKind::adaboost: {
        const NamedTensor& packed = need(t, "ada.stumps");
        if (packed.shape.size() != 2 || packed.shape[1] != 3)
            throw FormatError("model io: \"ada.stumps\" must be (stumps, 3)");
        std::vector<Stump> stumps(packed.shape[0]);
        for (size_t r = 0; r < stumps.size(); ++r) {
            const double* row = packed.values.data() + r * 3;
            stumps[r] = {static_cast<int>(std::llround(row[0])), row[1],
                         static_cast<int>(std::llround(row[2]))};
        }
        return std::make_unique<AdaBoostModel>(input_dim, std::move(stumps),
                                               need(t, "ada.alphas").values);
    }
    case ClassifierKind::gnb:
        return std::make_unique<GnbModel>(need(t, "gnb.prior").values,
                                          as_matrix(need(t, "gnb.mean"), "gnb.mean"),
                                          as_matrix(need(t, "gnb.var"), "gnb.var"));
    }
    throw FormatError("model io: unknown model kind code");
}

} // namespace uqlearn
