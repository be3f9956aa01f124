#include <algorithm>
#include <cmath>
#include <numeric>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

int DecisionTree::predict(std::span<const double> x) const {
    int node = 0;
    for (;;) {
        const TreeNode& nd = nodes[static_cast<size_t>(node)];
        if (nd.feature < 0) return nd.label;
        node = x[static_cast<size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
}

ForestModel::ForestModel(size_t input_dim, std::vector<DecisionTree> trees)
    : TrainedModel(ClassifierKind::random_forest, input_dim), trees_(std::move(trees)) {}

ProbabilityPrediction ForestModel::do_predict(std::span<const double> x) const {
    size_t votes1 = 0;
    for (const DecisionTree& tree : trees_) votes1 += static_cast<size_t>(tree.predict(x));
    const double p1 = static_cast<double>(votes1) / static_cast<double>(trees_.size());
    return {1.0 - p1, p1};
}

namespace detail {

namespace {

struct TreeBuilder {
    const Matrix& x;
    const std::vector<int>& labels;
    size_t n_candidates;
    Rng& rng;
    DecisionTree tree;

    int build(std::vector<size_t>& rows) {
        const size_t n1 =
            static_cast<size_t>(std::count_if(rows.begin(), rows.end(),
                                              [&](size_t r) { return labels[r] == 1; }));
        const size_t n0 = rows.size() - n1;
        if (n0 == 0 || n1 == 0 || rows.size() < 2) return make_leaf(n0, n1);

        // Candidate features: partial Fisher-Yates over the feature indices.
        const size_t dim = x.cols();
        std::vector<size_t> features(dim);
        std::iota(features.begin(), features.end(), size_t{0});
        for (size_t i = 0; i < n_candidates; ++i)
            std::swap(features[i], features[i + rng.uniform_index(dim - i)]);
        features.resize(n_candidates);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gini = gini(n0, n1); // must strictly improve on the parent

        std::vector<std::pair<double, int>> vals(rows.size());
        for (size_t f : features) {
            for (size_t i = 0; i < rows.size(); ++i)
                vals[i] = {x(rows[i], f), labels[rows[i]]};
            std::sort(vals.begin(), vals.end());

            size_t left1 = 0;
            for (size_t i = 0; i + 1 < vals.size(); ++i) {
                left1 += static_cast<size_t>(vals[i].second);
                if (vals[i].first == vals[i + 1].first) continue;
                const size_t nl = i + 1, nr = vals.size() - nl;
                const size_t l1 = left1, l0 = nl - l1;
                const size_t r1 = n1 - l1, r0 = nr - r1;
                const double weighted =
                    (static_cast<double>(nl) * gini(l0, l1) +
                     static_cast<double>(nr) * gini(r0, r1)) /
                    static_cast<double>(vals.size());
                if (weighted < best_gini - 1e-12) {
                    best_gini = weighted;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return make_leaf(n0, n1);

        std::vector<size_t> left_rows, right_rows;
        for (size_t r : rows)
            (x(r, static_cast<size_t>(best_feature)) <= best_threshold ? left_rows : right_rows)
                .push_back(r);
        if (left_rows.empty() || right_rows.empty()) return make_leaf(n0, n1);

        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({best_feature, best_threshold, -1, -1, 0});
        const int left = build(left_rows);
        const int right = build(right_rows);
        tree.nodes[static_cast<size_t>(id)].left = left;
        tree.nodes[static_cast<size_t>(id)].right = right;
        return id;
    }

    int make_leaf(size_t n0, size_t n1) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({-1, 0.0, -1, -1, n1 > n0 ? 1 : 0});
        return id;
    }

    static double gini(size_t n0, size_t n1) {
        const double total = static_cast<double>(n0 + n1);
        if (total == 0.0) return 0.0;
        const double p0 = static_cast<double>(n0) / total;
        const double p1 = static_cast<double>(n1) / total;
        return 1.0 - p0 * p0 - p1 * p1;
    }
};

} // namespace

// Bootstrap-sampled trees, sqrt(d) feature candidates per split, Gini
// impurity, grown to purity. Tree t is seeded from seed ^ splitmix64(t).
std::unique_ptr<TrainedModel> fit_forest(const ClassifierConfig& config,
                                         const LabeledDataset& train) {
    const size_t n = train.size();
    const size_t dim = train.dim();
    const size_t n_candidates = std::max<size_t>(
        1, static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(dim)))));

    std::vector<DecisionTree> trees;
    for (int t = 0; t < config.n_trees; ++t) {
        Rng rng(config.seed ^ splitmix64(static_cast<uint64_t>(t)));
        std::vector<size_t> rows(n);
        for (size_t i = 0; i < n; ++i) rows[i] = rng.uniform_index(n);
        TreeBuilder builder{train.features, train.labels, n_candidates, rng, {}};
        builder.build(rows);
        trees.push_back(std::move(builder.tree));
    }
    return std::make_unique<ForestModel>(dim, std::move(trees));
}

} // namespace detail
} // namespace uqlearn
