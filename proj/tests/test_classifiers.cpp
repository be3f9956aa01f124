#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <unistd.h>

#include "uqlearn/classifier.hpp"
#include "uqlearn/data.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"
#include "uqlearn/rng.hpp"
#include "uqlearn/weights.hpp"

using namespace uqlearn;
namespace fs = std::filesystem;

namespace {

const std::vector<ClassifierKind> kAllKinds = {
    ClassifierKind::knn,           ClassifierKind::linear_svm, ClassifierKind::rbf_svm,
    ClassifierKind::gp,            ClassifierKind::mlp,        ClassifierKind::random_forest,
    ClassifierKind::adaboost,      ClassifierKind::gnb};

ClassifierConfig config_for(ClassifierKind kind, uint64_t seed = 0) {
    ClassifierConfig c;
    c.kind = kind;
    c.seed = seed;
    c.epochs = 80; // keep unit tests quick; defaults exercised elsewhere
    c.hidden_units = 16;
    return c;
}

LabeledDataset two_point_dataset() {
    LabeledDataset ds;
    ds.features = Matrix(2, 1, {0.0, 1.0});
    ds.labels = {0, 1};
    ds.ids = {"a", "b"};
    return ds;
}

double frac_correct_training(const TrainedModel& model, const LabeledDataset& ds) {
    size_t hits = 0;
    for (size_t i = 0; i < ds.size(); ++i)
        if (model.predict_label(ds.features.row(i)) == ds.labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

} // namespace

TEST_CASE("minkowski distance worked examples") {
    const std::vector<double> zero = {0.0, 0.0}, far = {3.0, 4.0};
    CHECK(minkowski_distance(far, far, 2.0) == 0.0);
    CHECK(minkowski_distance(zero, far, 2.0) == doctest::Approx(5.0));
    CHECK(minkowski_distance(zero, far, 1.0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(minkowski_distance(zero, std::vector<double>{1.0}, 2.0), ShapeError);
    CHECK_THROWS_AS(minkowski_distance(zero, far, 0.5), ValidationError);
}

TEST_CASE("minkowski p=2 equals euclidean on 1000 random pairs") {
    Rng rng(2024);
    for (int t = 0; t < 1000; ++t) {
        const size_t dim = 1 + rng.uniform_index(8);
        std::vector<double> x(dim), y(dim);
        for (size_t i = 0; i < dim; ++i) {
            x[i] = rng.normal() * 3.0;
            y[i] = rng.normal() * 3.0;
        }
        double sq = 0.0;
        for (size_t i = 0; i < dim; ++i) sq += (x[i] - y[i]) * (x[i] - y[i]);
        CHECK(std::abs(minkowski_distance(x, y, 2.0) - std::sqrt(sq)) <= 1e-12);
    }
}

TEST_CASE("rbf kernel worked examples and bounds") {
    const std::vector<double> x = {1.0, 2.0};
    CHECK(rbf_kernel(x, x, 1.0) == 1.0);

    const std::vector<double> a = {0.0, 0.0}, b = {1.0, 1.0}; // squared distance 2
    CHECK(rbf_kernel(a, b, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(rbf_kernel(a, b, 1e6) == doctest::Approx(1.0).epsilon(1e-6));

    // the unsquared variant drops the square on the norm
    CHECK(rbf_kernel(a, b, 1.0, true) ==
          doctest::Approx(std::exp(-std::sqrt(2.0) / 2.0)).epsilon(1e-12));

    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> u(3), v(3);
        for (size_t i = 0; i < 3; ++i) {
            u[i] = rng.normal();
            v[i] = rng.normal();
        }
        const double k = rbf_kernel(u, v, 0.7);
        CHECK(k > 0.0);
        CHECK(k <= 1.0);
        if (u != v) CHECK(k < 1.0);
    }
    CHECK_THROWS_AS(rbf_kernel(a, std::vector<double>{1.0}, 1.0), ShapeError);
}

TEST_CASE("memorization floor: every kind recovers the two training points") {
    const LabeledDataset ds = two_point_dataset();
    for (ClassifierKind kind : kAllKinds) {
        CAPTURE(std::string(kind_name(kind)));
        ClassifierConfig full_defaults; // default epochs/hidden for the mlp case
        full_defaults.kind = kind;
        full_defaults.seed = 3;
        const auto model = fit(full_defaults, ds);
        for (size_t i = 0; i < 2; ++i) {
            const ProbabilityPrediction p = model->predict_proba(ds.features.row(i));
            CHECK((ds.labels[i] == 1 ? p.p1 : p.p0) >= 0.5);
        }
    }
}

TEST_CASE("linear svm separates a wide-margin synthetic set") {
    const LabeledDataset ds = synth_gaussian(50, 50, 2, 8.0, 21);
    const auto model = fit(config_for(ClassifierKind::linear_svm), ds);
    CHECK(frac_correct_training(*model, ds) >= 0.98);
}

TEST_CASE("linear svm: decision score sign matches the predicted label") {
    const LabeledDataset ds = synth_gaussian(30, 30, 2, 6.0, 4);
    const auto model = fit(config_for(ClassifierKind::linear_svm), ds);
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        const std::vector<double> x = {rng.normal() * 2.0, rng.normal() * 2.0};
        const double score = model->decision_score(x);
        const int label = model->predict_label(x);
        if (score > 0.0) CHECK(label == 1);
        if (score < 0.0) CHECK(label == 0);
        CHECK(std::isfinite(score));
    }
}

TEST_CASE("linear svm satisfies KKT complementarity at convergence") {
    const LabeledDataset ds = synth_gaussian(20, 20, 2, 4.0, 13);
    const auto model = fit(config_for(ClassifierKind::linear_svm), ds);
    const auto& svm = dynamic_cast<const LinearSvmModel&>(*model);
    REQUIRE(svm.alpha().size() == ds.size());

    const double c_penalty = 1.0, tol = 1e-6;
    for (size_t i = 0; i < ds.size(); ++i) {
        const double margin = svm.decision_score(ds.features.row(i));
        const double y = ds.labels[i] == 1 ? 1.0 : -1.0;
        const double yf = y * margin;
        const double alpha = svm.alpha()[i];
        CHECK(alpha >= -tol);
        CHECK(alpha <= c_penalty + tol);
        if (alpha < 1e-9) CHECK(yf >= 1.0 - tol);
        else if (alpha > c_penalty - 1e-9) CHECK(yf <= 1.0 + tol);
        else CHECK(std::abs(yf - 1.0) <= tol);
    }
}

TEST_CASE("gnb decision boundary sits midway between far-separated means") {
    // class means 0 and 10 with unit variance
    Rng rng(31);
    const size_t n = 400;
    LabeledDataset ds;
    ds.features = Matrix(2 * n, 1);
    for (size_t i = 0; i < 2 * n; ++i) {
        const bool positive = i < n;
        ds.features(i, 0) = (positive ? 10.0 : 0.0) + rng.normal();
        ds.labels.push_back(positive ? 1 : 0);
        ds.ids.push_back("s" + std::to_string(i));
    }
    const auto model = fit(config_for(ClassifierKind::gnb), ds);

    double boundary = 0.0;
    for (double x = 0.0; x <= 10.0; x += 0.001) {
        const std::vector<double> q = {x};
        if (model->predict_label(q) == 1) {
            boundary = x;
            break;
        }
    }
    CHECK(boundary == doctest::Approx(5.0).epsilon(0.1));

    // a query at one class mean gets that class with near certainty
    CHECK(model->predict_proba(std::vector<double>{10.0}).p1 >= 0.99);
    CHECK(model->predict_proba(std::vector<double>{0.0}).p0 >= 0.99);
}

TEST_CASE("gnb matches the closed-form gaussian posterior oracle") {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t dim = 1 + rng.uniform_index(2); // 1D or 2D
        const size_t n = 6 + rng.uniform_index(20);
        LabeledDataset ds;
        ds.features = Matrix(n, dim);
        bool has[2] = {false, false};
        for (size_t i = 0; i < n; ++i) {
            const int label = rng.uniform01() < 0.5 ? 0 : 1;
            has[label] = true;
            for (size_t j = 0; j < dim; ++j)
                ds.features(i, j) = rng.normal() * 2.0 + (label == 1 ? 1.0 : -1.0);
            ds.labels.push_back(label);
            ds.ids.push_back("r" + std::to_string(i));
        }
        if (!has[0] || !has[1]) continue;

        const auto model = fit(config_for(ClassifierKind::gnb), ds);

        // independent oracle: ML per-class mean/variance (floored), Bayes rule
        size_t count[2] = {0, 0};
        std::vector<double> mean[2] = {std::vector<double>(dim, 0.0),
                                       std::vector<double>(dim, 0.0)};
        std::vector<double> var[2] = {std::vector<double>(dim, 0.0),
                                      std::vector<double>(dim, 0.0)};
        for (size_t i = 0; i < n; ++i) {
            const int c = ds.labels[i];
            ++count[c];
            for (size_t j = 0; j < dim; ++j) mean[c][j] += ds.features(i, j);
        }
        for (int c = 0; c < 2; ++c)
            for (size_t j = 0; j < dim; ++j) mean[c][j] /= static_cast<double>(count[c]);
        for (size_t i = 0; i < n; ++i) {
            const int c = ds.labels[i];
            for (size_t j = 0; j < dim; ++j) {
                const double d = ds.features(i, j) - mean[c][j];
                var[c][j] += d * d;
            }
        }
        for (int c = 0; c < 2; ++c)
            for (size_t j = 0; j < dim; ++j)
                var[c][j] = std::max(var[c][j] / static_cast<double>(count[c]), 1e-9);

        for (int q = 0; q < 5; ++q) {
            std::vector<double> x(dim);
            for (size_t j = 0; j < dim; ++j) x[j] = rng.normal() * 2.0;
            double joint[2];
            for (int c = 0; c < 2; ++c) {
                double lj = std::log(static_cast<double>(count[c]) / static_cast<double>(n));
                for (size_t j = 0; j < dim; ++j)
                    lj += -0.5 * std::log(2.0 * M_PI * var[c][j]) -
                          (x[j] - mean[c][j]) * (x[j] - mean[c][j]) / (2.0 * var[c][j]);
                joint[c] = lj;
            }
            const double m = std::max(joint[0], joint[1]);
            const double e0 = std::exp(joint[0] - m), e1 = std::exp(joint[1] - m);
            const double oracle_p1 = e1 / (e0 + e1);
            CHECK(model->predict_proba(x).p1 == doctest::Approx(oracle_p1).epsilon(1e-9));
        }
    }
}

TEST_CASE("knn: unanimous neighbors give certainty, ties fall to the nearer class") {
    LabeledDataset ds;
    ds.features = Matrix(4, 1, {0.0, 0.1, 10.0, 10.1});
    ds.labels = {1, 1, 0, 0};
    ds.ids = {"a", "b", "c", "d"};
    const auto model = fit(config_for(ClassifierKind::knn), ds);

    const ProbabilityPrediction near_pos = model->predict_proba(std::vector<double>{0.05});
    CHECK(near_pos.p1 == 1.0);
    CHECK(near_pos.p0 == 0.0);

    // k=2 with one neighbor from each class: probabilities stay at the tie
    const ProbabilityPrediction mid = model->predict_proba(std::vector<double>{5.04});
    CHECK(mid.p0 == 0.5);
    CHECK(mid.p1 == 0.5);
    // ... but the label follows the nearer neighbor on the exact tie
    CHECK(model->predict_label(std::vector<double>{4.9}) == 1);
    CHECK(model->predict_label(std::vector<double>{5.2}) == 0);
}

TEST_CASE("knn: matches exhaustive nearest-neighbor search on random instances") {
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 5 + rng.uniform_index(30);
        const size_t dim = 1 + rng.uniform_index(4);
        LabeledDataset ds;
        ds.features = Matrix(n, dim);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < dim; ++j) ds.features(i, j) = rng.normal();
            ds.labels.push_back(rng.uniform01() < 0.4 ? 1 : 0);
            ds.ids.push_back(std::to_string(i));
        }
        const auto model = fit(config_for(ClassifierKind::knn), ds);

        std::vector<double> q(dim);
        for (size_t j = 0; j < dim; ++j) q[j] = rng.normal();

        // brute force: all (distance, index) pairs sorted
        std::vector<std::pair<double, size_t>> all(n);
        for (size_t i = 0; i < n; ++i)
            all[i] = {minkowski_distance(ds.features.row(i), q, 2.0), i};
        std::sort(all.begin(), all.end());
        const double expected_p1 =
            (static_cast<double>(ds.labels[all[0].second]) +
             static_cast<double>(ds.labels[all[1].second])) / 2.0;
        CHECK(model->predict_proba(q).p1 == expected_p1);
    }
}

TEST_CASE("knn prediction invariant under coordinate permutation") {
    const LabeledDataset ds = synth_gaussian(10, 12, 5, 2.0, 6);
    LabeledDataset permuted = ds;
    const std::vector<size_t> perm = {3, 0, 4, 1, 2};
    for (size_t i = 0; i < ds.size(); ++i)
        for (size_t j = 0; j < 5; ++j) permuted.features(i, j) = ds.features(i, perm[j]);

    const auto model = fit(config_for(ClassifierKind::knn), ds);
    const auto model_p = fit(config_for(ClassifierKind::knn), permuted);

    Rng rng(17);
    for (int t = 0; t < 25; ++t) {
        std::vector<double> q(5), qp(5);
        for (size_t j = 0; j < 5; ++j) q[j] = rng.normal() * 2.0;
        for (size_t j = 0; j < 5; ++j) qp[j] = q[perm[j]];
        CHECK(model->predict_proba(q).p1 == model_p->predict_proba(qp).p1);
    }
}

TEST_CASE("all kinds: probabilities are valid distributions on random queries") {
    const LabeledDataset ds = synth_gaussian(15, 18, 3, 2.0, 8);
    Rng rng(1);
    for (ClassifierKind kind : kAllKinds) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind, 5), ds);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> q(3);
            for (double& v : q) v = rng.normal() * 3.0;
            const ProbabilityPrediction p = model->predict_proba(q);
            CHECK(p.p0 >= 0.0);
            CHECK(p.p1 >= 0.0);
            CHECK(std::abs(p.p0 + p.p1 - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("all kinds: sorting by decision score matches sorting by p1 (non-SVM)") {
    const LabeledDataset ds = synth_gaussian(12, 12, 2, 3.0, 2);
    Rng rng(88);
    std::vector<std::vector<double>> queries;
    for (int t = 0; t < 15; ++t) queries.push_back({rng.normal() * 2.0, rng.normal() * 2.0});

    for (ClassifierKind kind : {ClassifierKind::knn, ClassifierKind::gp, ClassifierKind::mlp,
                                ClassifierKind::random_forest, ClassifierKind::adaboost,
                                ClassifierKind::gnb}) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind, 5), ds);
        for (const auto& q : queries)
            CHECK(model->decision_score(q) == model->predict_proba(q).p1);
    }
    // SVM margins are monotone with p1 through the logistic link
    for (ClassifierKind kind : {ClassifierKind::linear_svm, ClassifierKind::rbf_svm}) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind, 5), ds);
        for (size_t a = 0; a < queries.size(); ++a)
            for (size_t b = a + 1; b < queries.size(); ++b) {
                const double ds_a = model->decision_score(queries[a]);
                const double ds_b = model->decision_score(queries[b]);
                const double p_a = model->predict_proba(queries[a]).p1;
                const double p_b = model->predict_proba(queries[b]).p1;
                if (ds_a > ds_b) CHECK(p_a >= p_b);
                if (ds_a < ds_b) CHECK(p_a <= p_b);
            }
    }
}

TEST_CASE("predict_label: exact 0.5/0.5 tie resolves to label 0") {
    // hand-built model with identical class-conditionals and equal priors
    GnbModel model({0.5, 0.5}, Matrix(2, 1, {1.0, 1.0}), Matrix(2, 1, {1.0, 1.0}));
    const std::vector<double> q = {0.3};
    const ProbabilityPrediction p = model.predict_proba(q);
    CHECK(p.p0 == 0.5);
    CHECK(p.p1 == 0.5);
    CHECK(model.predict_label(q) == 0);
}

TEST_CASE("relabeling classes swaps probabilities for deterministic kinds") {
    const LabeledDataset ds = synth_gaussian(14, 17, 3, 3.0, 12);
    LabeledDataset flipped = ds;
    for (int& l : flipped.labels) l = 1 - l;

    Rng rng(3);
    std::vector<std::vector<double>> queries;
    for (int t = 0; t < 20; ++t)
        queries.push_back({rng.normal() * 2.0, rng.normal() * 2.0, rng.normal() * 2.0});

    for (ClassifierKind kind : {ClassifierKind::knn, ClassifierKind::gnb, ClassifierKind::gp}) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind), ds);
        const auto mirror = fit(config_for(kind), flipped);
        for (const auto& q : queries) {
            const ProbabilityPrediction p = model->predict_proba(q);
            const ProbabilityPrediction m = mirror->predict_proba(q);
            CHECK(p.p0 == doctest::Approx(m.p1).epsilon(1e-6));
            CHECK(p.p1 == doctest::Approx(m.p0).epsilon(1e-6));
        }
    }
}

TEST_CASE("relabeling classes swaps predicted labels for seeded kinds") {
    const LabeledDataset ds = synth_gaussian(20, 20, 2, 7.0, 19);
    LabeledDataset flipped = ds;
    for (int& l : flipped.labels) l = 1 - l;

    for (ClassifierKind kind : {ClassifierKind::linear_svm, ClassifierKind::rbf_svm,
                                ClassifierKind::mlp, ClassifierKind::random_forest,
                                ClassifierKind::adaboost}) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind, 7), ds);
        const auto mirror = fit(config_for(kind, 7), flipped);
        for (size_t i = 0; i < ds.size(); ++i) {
            const int a = model->predict_label(ds.features.row(i));
            const int b = mirror->predict_label(ds.features.row(i));
            CHECK(a == 1 - b);
        }
    }
}

TEST_CASE("mlp analytic gradient matches central finite differences") {
    Rng rng(606);
    MlpNet net(4, 5);
    net.init_glorot(rng);

    Matrix batch(6, 4);
    std::vector<int> labels;
    for (size_t i = 0; i < 6; ++i) {
        for (size_t j = 0; j < 4; ++j) batch(i, j) = rng.normal();
        labels.push_back(i % 2 == 0 ? 0 : 1);
    }
    std::vector<std::span<const double>> rows;
    for (size_t i = 0; i < 6; ++i) rows.push_back(batch.row(i));

    const std::vector<double> analytic = net.gradient(rows, labels);
    const double step = 1e-5;
    double worst = 0.0;
    for (size_t p = 0; p < net.params().size(); ++p) {
        const double saved = net.params()[p];
        net.params()[p] = saved + step;
        const double up = net.loss(rows, labels);
        net.params()[p] = saved - step;
        const double down = net.loss(rows, labels);
        net.params()[p] = saved;
        const double fd = (up - down) / (2.0 * step);
        const double rel = std::abs(analytic[p] - fd) /
                           std::max(1e-8, std::abs(analytic[p]) + std::abs(fd));
        worst = std::max(worst, rel);
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("adaboost training error is non-increasing over boosting rounds") {
    const LabeledDataset ds = synth_gaussian(40, 40, 3, 2.0, 5);
    ClassifierConfig cc = config_for(ClassifierKind::adaboost);
    cc.n_weak = 40;
    const auto model = fit(cc, ds);
    const auto& boost = dynamic_cast<const AdaBoostModel&>(*model);
    REQUIRE(boost.stumps().size() >= 2);

    double previous = 1.0;
    for (size_t rounds = 1; rounds <= boost.stumps().size(); ++rounds) {
        size_t wrong = 0;
        for (size_t i = 0; i < ds.size(); ++i) {
            double f = 0.0;
            for (size_t m = 0; m < rounds; ++m)
                f += boost.alphas()[m] * boost.stumps()[m].vote(ds.features.row(i));
            const int label = f > 0.0 ? 1 : 0;
            if (label != ds.labels[i]) ++wrong;
        }
        const double err = static_cast<double>(wrong) / static_cast<double>(ds.size());
        CHECK(err <= previous + 1e-12);
        previous = err;
    }
}

TEST_CASE("random forest and mlp are deterministic given the seed") {
    const LabeledDataset ds = synth_gaussian(25, 25, 4, 2.0, 44);
    Rng rng(12);
    for (ClassifierKind kind : {ClassifierKind::random_forest, ClassifierKind::mlp}) {
        CAPTURE(std::string(kind_name(kind)));
        const auto a = fit(config_for(kind, 99), ds);
        const auto b = fit(config_for(kind, 99), ds);
        for (int t = 0; t < 30; ++t) {
            std::vector<double> q(4);
            for (double& v : q) v = rng.normal() * 2.0;
            CHECK(a->predict_proba(q).p1 == b->predict_proba(q).p1); // bit-identical
        }
    }
}

TEST_CASE("single-class training: tolerated by knn/gnb, rejected elsewhere") {
    LabeledDataset ds;
    ds.features = Matrix(3, 2, {0, 0, 1, 1, 2, 2});
    ds.labels = {1, 1, 1};
    ds.ids = {"a", "b", "c"};

    for (ClassifierKind kind : {ClassifierKind::knn, ClassifierKind::gnb}) {
        const auto model = fit(config_for(kind), ds);
        CHECK(model->predict_label(std::vector<double>{5.0, -3.0}) == 1);
        CHECK(model->predict_proba(std::vector<double>{5.0, -3.0}).p1 == 1.0);
    }
    for (ClassifierKind kind : {ClassifierKind::linear_svm, ClassifierKind::rbf_svm,
                                ClassifierKind::gp, ClassifierKind::mlp,
                                ClassifierKind::random_forest, ClassifierKind::adaboost})
        CHECK_THROWS_AS(fit(config_for(kind), ds), ValidationError);
}

TEST_CASE("fit rejects non-finite features; predict rejects bad queries") {
    LabeledDataset ds = two_point_dataset();
    const auto model = fit(config_for(ClassifierKind::gnb), ds);
    CHECK_THROWS_AS(model->predict_proba(std::vector<double>{1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(model->predict_proba(std::vector<double>{std::nan("")}), ValidationError);

    ds.features.data()[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(fit(config_for(ClassifierKind::gnb), ds), ValidationError);
}

TEST_CASE("config validation rejects bad parameters") {
    ClassifierConfig c;
    c.k = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = ClassifierConfig{};
    c.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = ClassifierConfig{};
    c.learning_rate = -0.1;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("CMDL round trip preserves predictions for every kind") {
    const fs::path dir = fs::temp_directory_path() / ("uqlearn_cmdl_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const LabeledDataset ds = synth_gaussian(12, 14, 3, 3.0, 31);
    Rng rng(7);
    std::vector<std::vector<double>> queries;
    for (int t = 0; t < 10; ++t)
        queries.push_back({rng.normal() * 2.0, rng.normal() * 2.0, rng.normal() * 2.0});

    for (ClassifierKind kind : kAllKinds) {
        CAPTURE(std::string(kind_name(kind)));
        const auto model = fit(config_for(kind, 88), ds);
        const std::string path = (dir / (std::string(kind_name(kind)) + ".cmdl")).string();
        save_model(*model, path);
        const auto loaded = load_model(path);
        CHECK(loaded->kind() == kind);
        CHECK(loaded->input_dim() == 3);
        for (const auto& q : queries) {
            CHECK(loaded->predict_proba(q).p1 == model->predict_proba(q).p1); // bit-identical
            CHECK(loaded->decision_score(q) == model->decision_score(q));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("CMDL loader rejects foreign containers") {
    const fs::path dir = fs::temp_directory_path() / ("uqlearn_cmdl2_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string path = (dir / "weights.fzwt").string();
    save_weights(WeightStore{}, path);
    CHECK_THROWS_AS(load_model(path), FormatError);
    fs::remove_all(dir);
}
