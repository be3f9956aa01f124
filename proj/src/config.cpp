#include "uqlearn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& v, const std::string& key) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ValidationError("config: bad unsigned value \"" + v + "\" for " + key);
    return out;
}

double parse_real(const std::string& v, const std::string& key) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ValidationError("config: bad numeric value \"" + v + "\" for " + key);
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ValidationError("config: bad boolean \"" + v + "\" for " + key);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

KvMap parse_config_text(const std::string& text, const std::string& origin) {
    KvMap kv;
    std::istringstream in(text);
    std::string line, section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(origin + ": unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ParseError(origin + ": empty section name", line_no);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ": expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(origin + ": empty key", line_no);
        if (section.empty()) throw ParseError(origin + ": key outside any [section]", line_no);
        kv[section + "." + key] = value;
    }
    return kv;
}

KvMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

SynthSpec parse_synth_spec(const std::string& text) {
    const std::vector<std::string> parts = split_list(text, ',');
    if (parts.size() != 4)
        throw ValidationError("synth spec must be n_pos,n_neg,dim,separation; got \"" + text +
                              "\"");
    SynthSpec s;
    s.n_pos = static_cast<size_t>(parse_u64(parts[0], "synth.n_pos"));
    s.n_neg = static_cast<size_t>(parse_u64(parts[1], "synth.n_neg"));
    s.dim = static_cast<size_t>(parse_u64(parts[2], "synth.dim"));
    s.separation = parse_real(parts[3], "synth.separation");
    return s;
}

std::vector<ClassifierKind> PipelineConfig::effective_classifiers() const {
    if (!classifiers.empty()) return classifiers;
    return {ClassifierKind::knn, ClassifierKind::linear_svm, ClassifierKind::rbf_svm,
            ClassifierKind::gp, ClassifierKind::mlp, ClassifierKind::random_forest,
            ClassifierKind::adaboost, ClassifierKind::gnb};
}

void PipelineConfig::validate() const {
    if (sources.empty())
        throw ValidationError("config: at least one feature source (csv or synth) required");
    for (const FeatureSource& s : sources) {
        const bool has_csv = !s.csv_path.empty();
        if (has_csv == s.synth.has_value())
            throw ValidationError("config: source \"" + s.name +
                                  "\" must have exactly one of csv path or synth spec");
    }
    if (n_runs < 1) throw ValidationError("config: runs must be >= 1");
    if (pca_components < 1) throw ValidationError("config: pca components must be >= 1");
    if (field_nx < 2 || field_ny < 2) throw ValidationError("config: field grid must be >= 2x2");
    if (jobs < 1) throw ValidationError("config: jobs must be >= 1");
    classifier_defaults.validate();
    ensemble.validate();
}

PipelineConfig pipeline_config_from_kv(const KvMap& kv) {
    PipelineConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "data.synth") {
            FeatureSource src;
            src.name = "synth";
            src.synth = parse_synth_spec(value);
            cfg.sources.push_back(std::move(src));
        } else if (key == "data.features") {
            // name=path pairs separated by ';'
            for (const std::string& item : split_list(value, ';')) {
                const size_t eq = item.find('=');
                if (eq == std::string::npos)
                    throw ValidationError("config: data.features entries must be name=path");
                FeatureSource src;
                src.name = trim(item.substr(0, eq));
                src.csv_path = trim(item.substr(eq + 1));
                if (src.name.empty() || src.csv_path.empty())
                    throw ValidationError("config: data.features entries must be name=path");
                cfg.sources.push_back(std::move(src));
            }
        } else if (key == "split.test_fraction") {
            cfg.split.test_fraction = parse_real(value, key);
        } else if (key == "split.stratified") {
            cfg.split.stratified = parse_bool(value, key);
        } else if (key == "eval.runs") {
            cfg.n_runs = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "eval.classifiers") {
            cfg.classifiers.clear();
            for (const std::string& name : split_list(value, ','))
                cfg.classifiers.push_back(kind_from_name(name));
        } else if (key == "classifier.k") {
            cfg.classifier_defaults.k = static_cast<int>(parse_u64(value, key));
        } else if (key == "classifier.minkowski_p") {
            cfg.classifier_defaults.minkowski_p = parse_real(value, key);
        } else if (key == "classifier.sigma") {
            cfg.classifier_defaults.sigma = parse_real(value, key);
        } else if (key == "classifier.unsquared_norm") {
            cfg.classifier_defaults.unsquared_norm = parse_bool(value, key);
        } else if (key == "classifier.c_penalty") {
            cfg.classifier_defaults.c_penalty = parse_real(value, key);
        } else if (key == "classifier.hidden_units") {
            cfg.classifier_defaults.hidden_units = static_cast<int>(parse_u64(value, key));
        } else if (key == "classifier.epochs") {
            cfg.classifier_defaults.epochs = static_cast<int>(parse_u64(value, key));
        } else if (key == "classifier.learning_rate") {
            cfg.classifier_defaults.learning_rate = parse_real(value, key);
        } else if (key == "classifier.batch_size") {
            cfg.classifier_defaults.batch_size = static_cast<int>(parse_u64(value, key));
        } else if (key == "classifier.n_trees") {
            cfg.classifier_defaults.n_trees = static_cast<int>(parse_u64(value, key));
        } else if (key == "classifier.n_weak") {
            cfg.classifier_defaults.n_weak = static_cast<int>(parse_u64(value, key));
        } else if (key == "ensemble.n_models") {
            cfg.ensemble.n_models = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "ensemble.hidden_min") {
            cfg.ensemble.hidden_min = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "ensemble.hidden_max") {
            cfg.ensemble.hidden_max = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "ensemble.epochs") {
            cfg.ensemble.epochs = static_cast<int>(parse_u64(value, key));
        } else if (key == "ensemble.learning_rate") {
            cfg.ensemble.learning_rate = parse_real(value, key);
        } else if (key == "ensemble.batch_size") {
            cfg.ensemble.batch_size = static_cast<int>(parse_u64(value, key));
        } else if (key == "field.enabled") {
            cfg.field_enabled = parse_bool(value, key);
        } else if (key == "field.nx") {
            cfg.field_nx = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "field.ny") {
            cfg.field_ny = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "field.margin") {
            cfg.field_margin = parse_real(value, key);
        } else if (key == "pca.components") {
            cfg.pca_components = static_cast<size_t>(parse_u64(value, key));
        } else if (key == "output.dir") {
            cfg.out_dir = value;
        } else if (key == "output.seed") {
            cfg.base_seed = parse_u64(value, key);
        } else if (key == "output.jobs") {
            cfg.jobs = static_cast<int>(parse_u64(value, key));
        } else {
            throw ValidationError("config: unknown key \"" + key + "\"");
        }
    }
    return cfg;
}

nlohmann::ordered_json config_echo(const PipelineConfig& config) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json sources = nlohmann::ordered_json::array();
    for (const FeatureSource& s : config.sources) {
        nlohmann::ordered_json src;
        src["name"] = s.name;
        if (s.synth) {
            src["synth"] = {{"n_pos", s.synth->n_pos}, {"n_neg", s.synth->n_neg},
                            {"dim", s.synth->dim}, {"separation", s.synth->separation}};
        } else {
            src["csv"] = s.csv_path;
        }
        sources.push_back(src);
    }
    j["sources"] = sources;

    nlohmann::ordered_json kinds = nlohmann::ordered_json::array();
    for (ClassifierKind k : config.effective_classifiers()) kinds.push_back(kind_name(k));
    j["classifiers"] = kinds;

    j["split"] = {{"test_fraction", config.split.test_fraction},
                  {"stratified", config.split.stratified}};
    j["runs"] = config.n_runs;

    const ClassifierConfig& c = config.classifier_defaults;
    j["classifier"] = {{"k", c.k},
                       {"minkowski_p", c.minkowski_p},
                       {"sigma", c.sigma},
                       {"unsquared_norm", c.unsquared_norm},
                       {"c_penalty", c.c_penalty},
                       {"hidden_units", c.hidden_units},
                       {"epochs", c.epochs},
                       {"learning_rate", c.learning_rate},
                       {"batch_size", c.batch_size},
                       {"n_trees", c.n_trees},
                       {"n_weak", c.n_weak}};

    const EnsembleConfig& e = config.ensemble;
    j["ensemble"] = {{"n_models", e.n_models},       {"hidden_min", e.hidden_min},
                     {"hidden_max", e.hidden_max},   {"epochs", e.epochs},
                     {"learning_rate", e.learning_rate}, {"batch_size", e.batch_size}};

    j["pca_components"] = config.pca_components;
    j["field"] = {{"enabled", config.field_enabled},
                  {"nx", config.field_nx},
                  {"ny", config.field_ny},
                  {"margin", config.field_margin}};
    j["out_dir"] = config.out_dir;
    j["seed"] = config.base_seed;
    j["jobs"] = config.jobs;
    return j;
}

} // namespace uqlearn
