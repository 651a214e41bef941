#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "dbd/cli.hpp"
#include "dbd/error.hpp"
#include "dbd/evaluation.hpp"
#include "dbd/features.hpp"
#include "dbd/model.hpp"
#include "dbd/selection.hpp"
#include "dbd/tabular.hpp"
#include "dbd/url.hpp"

namespace py = pybind11;
using namespace dbd;

namespace {

Dataset dataset_from_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read dataset file: " + path);
    bool arff = path.size() > 5 && path.rfind(".arff") == path.size() - 5;
    return load_tabular(in, arff ? TabularFormat::Arff : TabularFormat::Csv);
}

LearnerSpec build_spec(const std::string& learner, double confidence_factor, double min_leaf,
                       bool prune, std::size_t optimizations, std::uint64_t seed) {
    auto kind = learner_kind_from(learner);
    if (!kind) throw ConfigError("unknown learner: " + learner + " (valid: nb, jrip, j48)");
    LearnerSpec spec;
    spec.kind = *kind;
    spec.c45.confidence_factor = confidence_factor;
    spec.c45.min_leaf = min_leaf;
    spec.c45.prune = prune;
    spec.ripper.optimizations = optimizations;
    spec.ripper.seed = seed;
    return spec;
}

TrainedModel train_spec(const Dataset& d, const LearnerSpec& spec) {
    switch (spec.kind) {
    case LearnerKind::NaiveBayes: return TrainedModel(d.schema(), fit_naive_bayes(d));
    case LearnerKind::Ripper: return TrainedModel(d.schema(), fit_ripper(d, spec.ripper));
    case LearnerKind::C45: return TrainedModel(d.schema(), fit_c45(d, spec.c45));
    }
    throw ConfigError("unknown learner kind");
}

py::dict row_to_dict(const MetricRow& row) {
    py::dict d;
    d["tpr"] = row.tpr;
    d["fpr"] = row.fpr;
    d["precision"] = row.precision;
    d["recall"] = row.recall;
    d["f_measure"] = row.f_measure;
    d["mcc"] = row.mcc;
    d["roc_area"] = row.roc_area;
    d["prc_area"] = row.prc_area;
    return d;
}

} // namespace

PYBIND11_MODULE(_dbdurl, m) {
    m.doc() = "malicious URL classification: feature extraction, attribute "
              "ranking, nb/jrip/j48 training and cross-validated evaluation";

    py::register_exception<Error>(m, "DbdError");

    py::class_<ParsedUrl>(m, "ParsedUrl")
        .def_readonly("scheme", &ParsedUrl::scheme)
        .def_readonly("host", &ParsedUrl::host)
        .def_readonly("port", &ParsedUrl::port)
        .def_readonly("path", &ParsedUrl::path)
        .def_readonly("query", &ParsedUrl::query)
        .def_readonly("raw", &ParsedUrl::raw)
        .def("__repr__", [](const ParsedUrl& u) { return "<ParsedUrl " + u.raw + ">"; });

    m.def("parse_url", &parse_url, py::arg("url"));

    py::class_<FeatureVector8>(m, "FeatureVector")
        .def_property_readonly("host_rank",
                               [](const FeatureVector8& f) { return f.host_rank; })
        .def_property_readonly("country_rank",
                               [](const FeatureVector8& f) { return f.country_rank; })
        .def_property_readonly("asn_number",
                               [](const FeatureVector8& f) { return f.asn_number; })
        .def_readonly("dots_in_url", &FeatureVector8::dots_in_url)
        .def_readonly("length_of_url", &FeatureVector8::length_of_url)
        .def_readonly("ip_address", &FeatureVector8::ip_address)
        .def_readonly("length_of_hostname", &FeatureVector8::length_of_hostname)
        .def_property_readonly("safe_browsing", [](const FeatureVector8& f) {
            switch (f.safe_browsing) {
            case SafeBrowsingVerdict::Safe: return "safe";
            case SafeBrowsingVerdict::Unsafe: return "unsafe";
            default: return "unknown";
            }
        });

    m.def(
        "lexical_features",
        [](const std::string& url) { return lexical_features(parse_url(url)); },
        py::arg("url"));

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("num_instances", &Dataset::size)
        .def_property_readonly("attribute_names",
                               [](const Dataset& d) {
                                   std::vector<std::string> names;
                                   for (const auto& a : d.schema().attributes())
                                       names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("class_values",
                               [](const Dataset& d) {
                                   return d.schema().class_attribute().values;
                               })
        .def("class_counts", &Dataset::class_counts)
        .def("save_csv",
             [](const Dataset& d, const std::string& path) {
                 std::ofstream out(path);
                 if (!out) throw ConfigError("cannot write: " + path);
                 save_csv(d, out);
             })
        .def("filter",
             [](const Dataset& d, const std::vector<std::string>& keep) {
                 return filter_attributes(d, keep);
             })
        .def("__len__", &Dataset::size)
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::to_string(d.size()) + " instances, " +
                   std::to_string(d.schema().size()) + " attributes>";
        });

    m.def("load_dataset", &dataset_from_path, py::arg("path"),
          "load a feature csv or arff file");

    m.def(
        "extract",
        [](const std::string& urls_path, const std::string& snapshot_dir) {
            std::ifstream in(urls_path);
            if (!in) throw ConfigError("cannot read url list: " + urls_path);
            auto records = load_url_list(in);
            auto providers = load_snapshot_dir(snapshot_dir);
            auto result = extract(records, providers);
            std::vector<std::pair<std::size_t, std::string>> skipped;
            for (const auto& s : result.skipped) skipped.emplace_back(s.line, s.reason);
            return py::make_tuple(result.dataset, skipped);
        },
        py::arg("urls_path"), py::arg("snapshot_dir"),
        "extract the 8-feature dataset; returns (dataset, skipped)");

    m.def(
        "rank",
        [](const Dataset& d, const std::string& evaluator) {
            Evaluator e;
            if (evaluator == "ig")
                e = Evaluator::InformationGain;
            else if (evaluator == "cae")
                e = Evaluator::Correlation;
            else
                throw ConfigError("unknown evaluator: " + evaluator + " (valid: ig, cae)");
            auto ranking = rank_attributes(d, e);
            std::vector<std::pair<std::string, double>> out;
            for (const auto& s : ranking.scores) out.emplace_back(s.attribute, s.score);
            return out;
        },
        py::arg("dataset"), py::arg("evaluator"));

    m.def(
        "information_gain",
        [](const Dataset& d, const std::string& attribute) {
            auto idx = d.schema().find(attribute);
            if (!idx) throw InvalidArgument("unknown attribute \"" + attribute + "\"");
            return information_gain(d, *idx);
        },
        py::arg("dataset"), py::arg("attribute"));

    m.def(
        "correlation",
        [](const Dataset& d, const std::string& attribute) {
            auto idx = d.schema().find(attribute);
            if (!idx) throw InvalidArgument("unknown attribute \"" + attribute + "\"");
            return correlation_eval(d, *idx);
        },
        py::arg("dataset"), py::arg("attribute"));

    m.def("entropy", &entropy, py::arg("class_counts"));

    py::class_<TrainedModel>(m, "Model")
        .def_property_readonly("kind",
                               [](const TrainedModel& m_) {
                                   return std::string(learner_kind_name(m_.kind()));
                               })
        .def("save",
             [](const TrainedModel& m_, const std::string& path) {
                 std::ofstream out(path);
                 if (!out) throw ConfigError("cannot write: " + path);
                 out << serialize_model(m_);
             })
        .def("serialize", [](const TrainedModel& m_) { return serialize_model(m_); })
        .def(
            "classify_url",
            [](const TrainedModel& m_, const std::string& url, const std::string& snapshot_dir) {
                ProviderSet providers;
                if (!snapshot_dir.empty()) providers = load_snapshot_dir(snapshot_dir);
                auto f = extract_features(parse_url(url), providers);
                auto inst = feature_instance_for(m_.schema(), f);
                auto dist = m_.predict(inst);
                auto positive = positive_class_index(m_.schema());
                auto cls = dist.argmax(positive);
                return py::make_tuple(m_.schema().class_attribute().values[cls],
                                      dist.probabilities[positive]);
            },
            py::arg("url"), py::arg("snapshot_dir") = "",
            "returns (verdict, malicious_probability)");

    m.def("load_model", [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read model file: " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return deserialize_model(buffer.str());
    });
    m.def("deserialize_model", &deserialize_model, py::arg("text"));

    m.def(
        "train",
        [](const Dataset& d, const std::string& learner, double confidence_factor,
           double min_leaf, bool prune, std::size_t optimizations, std::uint64_t seed) {
            return train_spec(d, build_spec(learner, confidence_factor, min_leaf, prune,
                                            optimizations, seed));
        },
        py::arg("dataset"), py::arg("learner"), py::arg("confidence_factor") = 0.25,
        py::arg("min_leaf") = 2.0, py::arg("prune") = true, py::arg("optimizations") = 2,
        py::arg("seed") = 1);

    m.def(
        "cross_validate",
        [](const Dataset& d, const std::string& learner, std::size_t folds, std::uint64_t seed,
           double confidence_factor, double min_leaf, bool prune, std::size_t optimizations) {
            auto spec = build_spec(learner, confidence_factor, min_leaf, prune, optimizations,
                                   seed);
            auto report = cross_validate(d, make_learner(spec), folds, seed);
            py::dict out;
            out["k"] = report.k;
            out["seed"] = report.seed;
            out["pooled_accuracy"] = report.pooled_accuracy();
            out["mean_fold_accuracy"] = report.mean_fold_accuracy;
            py::dict cm;
            cm["tp"] = report.pooled.tp;
            cm["fn"] = report.pooled.fn;
            cm["fp"] = report.pooled.fp;
            cm["tn"] = report.pooled.tn;
            out["confusion"] = cm;
            out[py::str(report.positive_name)] = row_to_dict(report.positive_row);
            out[py::str(report.negative_name)] = row_to_dict(report.negative_row);
            out["average"] = row_to_dict(report.weighted_row);
            return out;
        },
        py::arg("dataset"), py::arg("learner"), py::arg("folds") = 10, py::arg("seed") = 1,
        py::arg("confidence_factor") = 0.25, py::arg("min_leaf") = 2.0, py::arg("prune") = true,
        py::arg("optimizations") = 2);

    m.def(
        "metrics_from_confusion",
        [](double tp, double fn, double fp, double tn) {
            ConfusionMatrix cm{tp, fn, fp, tn};
            py::dict out;
            out["tpr"] = tpr(cm);
            out["fpr"] = fpr(cm);
            out["precision"] = precision(cm);
            out["recall"] = recall(cm);
            out["f_measure"] = f_measure(cm);
            out["mcc"] = mcc(cm);
            return out;
        },
        py::arg("tp"), py::arg("fn"), py::arg("fp"), py::arg("tn"));

    m.def(
        "stratified_fold_of",
        [](const Dataset& d, std::size_t k, std::uint64_t seed) {
            return stratified_folds(d, k, seed).fold_of;
        },
        py::arg("dataset"), py::arg("k"), py::arg("seed") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "run the command-line front end; returns (exit_code, stdout, stderr)");
}
