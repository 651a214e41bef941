#include "dbd/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "dbd/error.hpp"
#include "dbd/evaluation.hpp"
#include "dbd/features.hpp"
#include "dbd/model.hpp"
#include "dbd/selection.hpp"
#include "dbd/tabular.hpp"
#include "dbd/util.hpp"

namespace dbd {

namespace {

const std::vector<std::string> kDefaultKeep = {"HostRank",    "CountryRank",
                                               "DotsInURL",   "LengthOfURL",
                                               "LengthOfHostname", "SafeBrowsing"};

struct Options {
    std::uint64_t seed = 1;
    std::string snapshots;
    std::string csv_path;
    std::string keep; // comma list, "all", or empty for the default set
    double min_accuracy = -1; // percent; negative means unset
    std::size_t folds = 10;
    std::string learner = "nb";
    bool all_learners = false;
    double confidence_factor = 0.25;
    double min_leaf = 2;
    std::size_t optimizations = 2;
    std::size_t grow_prune_folds = 3;
    bool unpruned = false;
};

Dataset load_features_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read features file: " + path);
    bool arff = path.size() > 5 && path.rfind(".arff") == path.size() - 5;
    return load_tabular(in, arff ? TabularFormat::Arff : TabularFormat::Csv);
}

/// Default posture: when the dataset carries the full standard feature
/// set, keep the six finalized attributes; otherwise leave it alone.
Dataset apply_keep(const Dataset& d, const std::string& keep) {
    if (keep == "all") return d;
    if (!keep.empty()) {
        std::vector<std::string> names;
        for (auto& n : split(keep, ',')) {
            auto t = trim(n);
            if (!t.empty()) names.emplace_back(t);
        }
        return filter_attributes(d, names);
    }
    for (const auto& name : kFeatureNames)
        if (!d.schema().find(name)) return d;
    return filter_attributes(d, kDefaultKeep);
}

LearnerSpec learner_spec(const Options& opt, const std::string& name) {
    auto kind = learner_kind_from(name);
    if (!kind)
        throw ConfigError("unknown learner: " + name + " (valid: nb, jrip, j48)");
    LearnerSpec spec;
    spec.kind = *kind;
    spec.c45.confidence_factor = opt.confidence_factor;
    spec.c45.min_leaf = opt.min_leaf;
    spec.c45.prune = !opt.unpruned;
    spec.ripper.optimizations = opt.optimizations;
    spec.ripper.folds_grow_prune = opt.grow_prune_folds;
    spec.ripper.seed = opt.seed;
    return spec;
}

TrainedModel train_model(const Dataset& d, const LearnerSpec& spec) {
    switch (spec.kind) {
    case LearnerKind::NaiveBayes: return TrainedModel(d.schema(), fit_naive_bayes(d));
    case LearnerKind::Ripper: return TrainedModel(d.schema(), fit_ripper(d, spec.ripper));
    case LearnerKind::C45: return TrainedModel(d.schema(), fit_c45(d, spec.c45));
    }
    throw ConfigError("unknown learner kind");
}

void print_training_confusion(const Dataset& d, const TrainedModel& model, std::ostream& out) {
    const auto positive = positive_class_index(d.schema());
    std::vector<std::size_t> predicted, actual;
    for (std::size_t i = 0; i < d.size(); ++i) {
        predicted.push_back(model.predict(d[i]).argmax(positive));
        actual.push_back(d.class_of(i));
    }
    auto cm = confusion(predicted, actual, positive);
    const auto& values = d.schema().class_attribute().values;
    confusion_table(cm, values[positive], values[1 - positive], out);
}

int cmd_extract(const Options& opt, const std::string& urls_path, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    std::ifstream urls_in(urls_path);
    if (!urls_in) throw ConfigError("cannot read url list: " + urls_path);
    auto records = load_url_list(urls_in);
    if (opt.snapshots.empty()) throw ConfigError("snapshot directory not set (--snapshots)");
    auto providers = load_snapshot_dir(opt.snapshots);
    auto result = extract(records, providers);
    for (const auto& skip : result.skipped)
        err << "SKIP " << skip.line << ' ' << skip.reason << '\n';
    std::ofstream file(out_path);
    if (!file) throw ConfigError("cannot write features file: " + out_path);
    save_csv(result.dataset, file);
    out << "extracted " << result.dataset.size() << " of " << records.size() << " urls to "
        << out_path << '\n';
    return 0;
}

int cmd_rank(const Options& opt, const std::string& features_path, const std::string& evaluator,
             std::ostream& out) {
    auto d = load_features_file(features_path);
    bool want_ig = evaluator == "ig" || evaluator == "both";
    bool want_corr = evaluator == "cae" || evaluator == "both";
    if (!want_ig && !want_corr)
        throw ConfigError("unknown evaluator: " + evaluator + " (valid: ig, cae, both)");

    std::vector<Ranking> rankings;
    if (want_ig) rankings.push_back(rank_attributes(d, Evaluator::InformationGain));
    if (want_corr) rankings.push_back(rank_attributes(d, Evaluator::Correlation));

    if (rankings.size() == 2) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-4s %-20s %8s   %-20s %8s", "rank", "information_gain",
                      "score", "correlation", "score");
        out << buf << '\n';
        for (std::size_t i = 0; i < rankings[0].scores.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%-4zu %-20s %8.4f   %-20s %8.4f", i + 1,
                          rankings[0].scores[i].attribute.c_str(), rankings[0].scores[i].score,
                          rankings[1].scores[i].attribute.c_str(), rankings[1].scores[i].score);
            out << buf << '\n';
        }
    } else {
        ranking_csv(rankings[0], out);
    }

    if (!opt.csv_path.empty()) {
        std::ofstream file(opt.csv_path);
        if (!file) throw ConfigError("cannot write csv: " + opt.csv_path);
        for (const auto& r : rankings) ranking_csv(r, file);
    }
    return 0;
}

int cmd_train(const Options& opt, const std::string& features_path, const std::string& out_path,
              std::ostream& out) {
    auto spec = learner_spec(opt, opt.learner);
    auto d = apply_keep(load_features_file(features_path), opt.keep);
    auto model = train_model(d, spec);
    std::ofstream file(out_path);
    if (!file) throw ConfigError("cannot write model file: " + out_path);
    file << serialize_model(model);
    out << "trained " << learner_kind_name(model.kind()) << " on " << d.size()
        << " instances -> " << out_path << '\n';
    print_training_confusion(d, model, out);
    return 0;
}

int cmd_eval(const Options& opt, const std::string& features_path, std::ostream& out) {
    auto d = apply_keep(load_features_file(features_path), opt.keep);

    std::vector<std::string> learners;
    if (opt.all_learners)
        learners = {"nb", "jrip", "j48"};
    else
        learners = {opt.learner};

    std::ofstream csv;
    if (!opt.csv_path.empty()) {
        csv.open(opt.csv_path);
        if (!csv) throw ConfigError("cannot write csv: " + opt.csv_path);
        if (learners.size() > 1) csv << "metric,class,value\n";
    }

    double lowest_accuracy = 1.0;
    for (std::size_t li = 0; li < learners.size(); ++li) {
        const auto& name = learners[li];
        auto spec = learner_spec(opt, name);
        auto report = cross_validate(d, make_learner(spec), opt.folds, opt.seed);
        if (li) out << '\n';
        out << "Learner: " << name << " (" << report.k << "-fold, seed " << report.seed << ")\n";
        report_table(report, out);
        out << '\n';
        confusion_table(report.pooled, report.positive_name, report.negative_name, out);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "Pooled accuracy: %.2f%%  Mean fold accuracy: %.2f%%",
                      report.pooled_accuracy() * 100.0, report.mean_fold_accuracy * 100.0);
        out << buf << '\n';
        lowest_accuracy = std::min(lowest_accuracy, report.pooled_accuracy());

        if (csv.is_open()) {
            if (learners.size() > 1) {
                std::ostringstream tmp;
                report_csv(report, tmp, name + ".");
                auto text = tmp.str();
                csv << text.substr(text.find('\n') + 1); // shared header already written
            } else {
                report_csv(report, csv);
            }
        }
    }

    if (opt.min_accuracy >= 0 && lowest_accuracy * 100.0 < opt.min_accuracy) return 1;
    return 0;
}

int cmd_classify(const Options& opt, const std::string& model_path, const std::string& url,
                 const std::string& urls_path, std::ostream& out) {
    std::ifstream model_in(model_path);
    if (!model_in) throw ConfigError("cannot read model file: " + model_path);
    std::stringstream buffer;
    buffer << model_in.rdbuf();
    auto model = deserialize_model(buffer.str());

    ProviderSet providers;
    if (!opt.snapshots.empty()) providers = load_snapshot_dir(opt.snapshots);

    std::vector<std::string> urls;
    if (!url.empty()) urls.push_back(url);
    if (!urls_path.empty()) {
        std::ifstream in(urls_path);
        if (!in) throw ConfigError("cannot read url list: " + urls_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto text = trim(line);
            if (text.empty()) continue;
            // accept bare urls or url,label lines
            auto comma = text.rfind(',');
            if (comma != std::string_view::npos) {
                auto suffix = to_lower(trim(text.substr(comma + 1)));
                if (suffix == "malicious" || suffix == "benign" || suffix == "label")
                    text = trim(text.substr(0, comma));
            }
            urls.emplace_back(text);
        }
    }
    if (urls.empty()) throw ConfigError("no url given (pass --url or a urls file)");

    const auto& schema = model.schema();
    const std::size_t positive = positive_class_index(schema);
    const auto& class_values = schema.class_attribute().values;

    for (const auto& u : urls) {
        FeatureVector8 f;
        try {
            f = extract_features(parse_url(u), providers);
        } catch (const ParseError&) {
            out << u << ",ERROR,parse\n";
            continue;
        }
        Instance inst = feature_instance_for(schema, f);
        auto dist = model.predict(inst);
        auto cls = dist.argmax(positive);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", dist.probabilities[positive]);
        out << u << ',' << class_values[cls] << ',' << buf << '\n';
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"drive-by-download URL classifier"};
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.add_option("--seed", opt.seed, "seed for every random decision")->capture_default_str();
    app.add_option("--snapshots", opt.snapshots, "directory of reputation snapshot csv files")
        ->envname("DBD_SNAPSHOT_DIR");
    app.add_option("--csv", opt.csv_path, "write a machine-readable csv to this path");
    app.add_option("--keep", opt.keep,
                   "comma list of attributes to keep, or \"all\"; default keeps the six "
                   "finalized features when the standard set is present");
    app.add_option("--min-accuracy", opt.min_accuracy,
                   "exit 1 when pooled accuracy (percent) falls below this");

    std::string urls_path, out_path, features_path, model_path, single_url;
    std::string evaluator = "both";

    auto* c_extract = app.add_subcommand("extract", "extract features for a url,label list");
    c_extract->add_option("urls", urls_path, "url,label csv file")->required();
    c_extract->add_option("out", out_path, "output feature csv")->required();

    auto* c_rank = app.add_subcommand("rank", "rank attributes by both evaluators");
    c_rank->add_option("features", features_path, "feature csv or arff file")->required();
    c_rank->add_option("--evaluator", evaluator, "ig, cae, or both")->capture_default_str();

    auto* c_train = app.add_subcommand("train", "train a classifier and save the model");
    c_train->add_option("features", features_path, "feature csv or arff file")->required();
    c_train->add_option("--learner", opt.learner, "nb, jrip, or j48")->capture_default_str();
    c_train->add_option("--out", out_path, "model file path")->required();
    c_train->add_option("--confidence-factor", opt.confidence_factor, "j48 pruning confidence")
        ->capture_default_str();
    c_train->add_option("--min-leaf", opt.min_leaf, "j48 minimum instances per branch")
        ->capture_default_str();
    c_train->add_flag("--unpruned", opt.unpruned, "skip j48 pruning");
    c_train->add_option("--optimizations", opt.optimizations, "jrip optimization passes")
        ->capture_default_str();
    c_train->add_option("--grow-prune-folds", opt.grow_prune_folds,
                        "jrip grow/prune split denominator")
        ->capture_default_str();

    auto* c_eval = app.add_subcommand("eval", "cross-validated evaluation report");
    c_eval->add_option("features", features_path, "feature csv or arff file")->required();
    c_eval->add_option("--learner", opt.learner, "nb, jrip, or j48")->capture_default_str();
    bool all_learners = false;
    c_eval->add_flag("--all-learners", all_learners, "evaluate nb, jrip, and j48");
    c_eval->add_option("--folds", opt.folds, "cross-validation folds")->capture_default_str();
    c_eval->add_option("--confidence-factor", opt.confidence_factor, "j48 pruning confidence")
        ->capture_default_str();
    c_eval->add_option("--min-leaf", opt.min_leaf, "j48 minimum instances per branch")
        ->capture_default_str();
    c_eval->add_flag("--unpruned", opt.unpruned, "skip j48 pruning");
    c_eval->add_option("--optimizations", opt.optimizations, "jrip optimization passes")
        ->capture_default_str();
    c_eval->add_option("--grow-prune-folds", opt.grow_prune_folds,
                       "jrip grow/prune split denominator")
        ->capture_default_str();

    auto* c_classify = app.add_subcommand("classify", "classify urls with a saved model");
    c_classify->add_option("--model,-m", model_path, "model file")->required();
    c_classify->add_option("--url", single_url, "single url to classify");
    c_classify->add_option("urls", urls_path, "file of urls (bare or url,label lines)");

    app.require_subcommand(0, 1);

    std::vector<const char*> argv;
    argv.push_back("dbdurl");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    opt.all_learners = all_learners;

    try {
        if (c_extract->parsed()) return cmd_extract(opt, urls_path, out_path, out, err);
        if (c_rank->parsed()) return cmd_rank(opt, features_path, evaluator, out);
        if (c_train->parsed()) return cmd_train(opt, features_path, out_path, out);
        if (c_eval->parsed()) return cmd_eval(opt, features_path, out);
        if (c_classify->parsed())
            return cmd_classify(opt, model_path, single_url, urls_path, out);
        out << app.help();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace dbd
