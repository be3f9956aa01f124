#include "uqlearn/uq.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uqlearn/errors.hpp"
#include "uqlearn/parallel.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

void EnsembleConfig::validate() const {
    if (n_models < 2) throw ValidationError("ensemble: n_models must be >= 2");
    if (hidden_min < 1 || hidden_min > hidden_max)
        throw ValidationError("ensemble: need 1 <= hidden_min <= hidden_max");
    if (epochs < 1 || batch_size < 1 || learning_rate <= 0.0)
        throw ValidationError("ensemble: bad training parameters");
}

size_t Ensemble::input_dim() const {
    return members.empty() ? 0 : members.front()->input_dim();
}

Ensemble build_ensemble(const LabeledDataset& train, const EnsembleConfig& config) {
    config.validate();
    if (train.count_label(0) == 0 || train.count_label(1) == 0)
        throw ValidationError("build_ensemble: both classes must be present");

    Ensemble ensemble;
    ensemble.hidden_sizes.resize(config.n_models);
    ensemble.members.resize(config.n_models);

    parallel_for(config.n_models, [&](size_t i) {
        const uint64_t member_seed = config.base_seed ^ splitmix64(i);
        Rng rng(member_seed);
        const size_t hidden = static_cast<size_t>(
            rng.uniform_int(static_cast<long>(config.hidden_min),
                            static_cast<long>(config.hidden_max)));

        ClassifierConfig cc;
        cc.kind = ClassifierKind::mlp;
        cc.hidden_units = static_cast<int>(hidden);
        cc.epochs = config.epochs;
        cc.learning_rate = config.learning_rate;
        cc.batch_size = config.batch_size;
        cc.seed = rng.next_u64();

        try {
            ensemble.members[i] = fit(cc, train);
        } catch (const std::runtime_error& e) {
            throw ValidationError("build_ensemble: member " + std::to_string(i) + ": " + e.what());
        }
        ensemble.hidden_sizes[i] = hidden;
    });
    return ensemble;
}

ProbabilityPrediction mean_predictive(const Ensemble& ensemble, std::span<const double> x) {
    if (ensemble.members.empty()) throw ValidationError("mean_predictive: empty ensemble");
    double p0 = 0.0, p1 = 0.0;
    for (const auto& member : ensemble.members) {
        const ProbabilityPrediction p = member->predict_proba(x);
        p0 += p.p0;
        p1 += p.p1;
    }
    const double n = static_cast<double>(ensemble.members.size());
    return {p0 / n, p1 / n};
}

double predictive_entropy(const ProbabilityPrediction& p) {
    p.validate();
    double h = 0.0;
    for (double v : {p.p0, p.p1})
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double EntropyField::cell_center_x(size_t j) const {
    return x_min + (static_cast<double>(j) + 0.5) * (x_max - x_min) / static_cast<double>(nx);
}

double EntropyField::cell_center_y(size_t i) const {
    return y_min + (static_cast<double>(i) + 0.5) * (y_max - y_min) / static_cast<double>(ny);
}

EntropyField entropy_field(const Ensemble& ensemble2d, double x_min, double x_max, double y_min,
                           double y_max, size_t nx, size_t ny) {
    if (ensemble2d.input_dim() != 2)
        throw ValidationError("entropy_field: ensemble input dimension must be 2, got " +
                              std::to_string(ensemble2d.input_dim()));
    if (nx < 2 || ny < 2) throw ValidationError("entropy_field: resolution must be at least 2x2");
    if (!(x_min < x_max) || !(y_min < y_max))
        throw ValidationError("entropy_field: degenerate bounds");

    EntropyField field;
    field.x_min = x_min;
    field.x_max = x_max;
    field.y_min = y_min;
    field.y_max = y_max;
    field.nx = nx;
    field.ny = ny;
    field.values = Matrix(ny, nx);

    parallel_for(ny, [&](size_t i) {
        const double y = field.cell_center_y(i);
        for (size_t j = 0; j < nx; ++j) {
            const double point[2] = {field.cell_center_x(j), y};
            field.values(i, j) = predictive_entropy(mean_predictive(ensemble2d, point));
        }
    });
    return field;
}

namespace {
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}
} // namespace

void save_entropy_field(const EntropyField& field, const std::string& csv_path,
                        const std::string& json_path) {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw IoError("cannot open " + csv_path + " for writing");
    for (size_t i = 0; i < field.ny; ++i) {
        for (size_t j = 0; j < field.nx; ++j) {
            if (j) csv << ',';
            csv << format_double(field.values(i, j));
        }
        csv << '\n';
    }
    if (!csv) throw IoError("write failed for " + csv_path);

    nlohmann::ordered_json sidecar;
    sidecar["x_min"] = field.x_min;
    sidecar["x_max"] = field.x_max;
    sidecar["y_min"] = field.y_min;
    sidecar["y_max"] = field.y_max;
    sidecar["nx"] = field.nx;
    sidecar["ny"] = field.ny;
    std::ofstream js(json_path, std::ios::trunc);
    if (!js) throw IoError("cannot open " + json_path + " for writing");
    js << sidecar.dump(2) << '\n';
    if (!js) throw IoError("write failed for " + json_path);
}

EntropyField load_entropy_field(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw IoError("cannot open " + json_path);
    nlohmann::json sidecar;
    try {
        js >> sidecar;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(json_path + ": " + e.what());
    }

    EntropyField field;
    try {
        field.x_min = sidecar.at("x_min").get<double>();
        field.x_max = sidecar.at("x_max").get<double>();
        field.y_min = sidecar.at("y_min").get<double>();
        field.y_max = sidecar.at("y_max").get<double>();
        field.nx = sidecar.at("nx").get<size_t>();
        field.ny = sidecar.at("ny").get<size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(json_path + ": " + e.what());
    }

    std::ifstream csv(csv_path);
    if (!csv) throw IoError("cannot open " + csv_path);
    field.values = Matrix(field.ny, field.nx);
    std::string line;
    for (size_t i = 0; i < field.ny; ++i) {
        if (!std::getline(csv, line))
            throw ParseError(csv_path + ": expected " + std::to_string(field.ny) + " rows",
                             static_cast<long>(i + 1));
        std::istringstream ss(line);
        std::string cell;
        for (size_t j = 0; j < field.nx; ++j) {
            if (!std::getline(ss, cell, ','))
                throw ParseError(csv_path + ": short row", static_cast<long>(i + 1));
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw ParseError(csv_path + ": bad cell \"" + cell + "\"",
                                 static_cast<long>(i + 1));
            field.values(i, j) = v;
        }
    }
    return field;
}

} // namespace uqlearn
