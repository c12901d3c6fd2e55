#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "json.hpp"

#include "adbdiff/capture.hpp"
#include "adbdiff/config.hpp"
#include "adbdiff/dataset.hpp"
#include "adbdiff/errors.hpp"
#include "adbdiff/features.hpp"
#include "adbdiff/filterlist.hpp"
#include "adbdiff/ml.hpp"
#include "adbdiff/model_io.hpp"
#include "adbdiff/report.hpp"
#include "adbdiff/sites.hpp"
#include "adbdiff/synth.hpp"
#include "adbdiff/url.hpp"

namespace {

using namespace adbdiff;
using nlohmann::json;

struct GlobalArgs {
    std::string config_path;
    std::string runlog_path = "runlog.json";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

config::Config load_config(const GlobalArgs& global) {
    if (global.config_path.empty()) return {};
    return config::parse_config(read_text_file(global.config_path));
}

std::uint64_t effective_seed(const GlobalArgs& global, const config::Config& cfg) {
    if (global.seed_set) return global.seed;
    return static_cast<std::uint64_t>(cfg.get_int("seed", 1));
}

std::vector<std::string> keyword_override(const config::Config& cfg) {
    return cfg.get_list("keywords");
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

// One JSON line appended per invocation; timings make this a log, not a
// reproducible artifact.
void append_runlog(const std::string& path, const json& entry) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) return;
    out << entry.dump() << "\n";
}

std::vector<std::string> sorted_host_dirs(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw IoError("snapshot root " + root.string() + " is not a directory");
    std::vector<std::string> hosts;
    for (const auto& entry : std::filesystem::directory_iterator(root))
        if (entry.is_directory()) hosts.push_back(entry.path().filename().string());
    std::sort(hosts.begin(), hosts.end());
    return hosts;
}

// ----------------------------------------------------------- subcommands --

struct SitesArgs {
    std::vector<std::string> awis_files;
    std::vector<std::string> list_files;
    std::vector<std::string> issue_files;
    std::string tag = "list";
    std::string out;
    bool print_request = false;
    std::string request_action = "CategoryListings";
    int request_count = 20;
    int request_start = 1;
    std::string request_path = "Top";
    std::string request_sort = "Popularity";
};

void run_sites(const SitesArgs& args) {
    if (args.print_request) {
        std::cout << build_awis_request(args.request_action, args.request_count,
                                        args.request_start, args.request_path, args.request_sort)
                  << "\n";
        return;
    }
    if (args.out.empty()) throw ParameterError("sites needs --out (or --print-request)");
    if (args.awis_files.empty() && args.list_files.empty() && args.issue_files.empty())
        throw ParameterError("sites needs at least one --awis-xml, --list or --issue-page input");

    std::vector<std::vector<SiteRecord>> lists;
    for (const std::string& file : args.awis_files)
        lists.push_back(parse_awis_xml(read_text_file(file)));
    for (const std::string& file : args.list_files)
        lists.push_back(read_site_list(read_text_file(file), args.tag));
    for (const std::string& file : args.issue_files)
        lists.push_back(parse_issue_corpus(read_text_file(file)));

    std::vector<SiteRecord> merged = dedupe_union(lists);
    write_text_file(args.out, write_site_list(merged));
    std::size_t total = 0;
    for (const auto& list : lists) total += list.size();
    std::cout << "merged " << total << " records into " << merged.size() << " sites -> "
              << args.out << "\n";
}

struct CaptureArgs {
    std::string sites_file;
    std::string offline_root;
    bool synth = false;
    std::string out_root;
    std::size_t pairs = 200;
    std::size_t walls = 40;
    std::size_t dead = 0;
};

void run_capture_synth(const CaptureArgs& args, std::uint64_t seed, const config::Config& cfg) {
    if (args.out_root.empty()) throw ParameterError("capture --synth needs --out");
    synth::SynthOptions opts;
    opts.pairs = args.pairs;
    opts.walls = args.walls;
    opts.dead = args.dead;
    opts.seed = seed;
    if (cfg.has("filter_list")) opts.filter_list_text = read_text_file(cfg.get("filter_list", ""));
    synth::SynthSummary summary = synth::generate_synth_corpus(args.out_root, opts);
    std::cout << "generated " << summary.pairs << " pairs (" << summary.walls << " walls, "
              << summary.dead << " dead) under " << args.out_root << "\n";
}

void run_capture_offline(const CaptureArgs& args) {
    std::size_t ok = 0, dead = 0, failed = 0, unreadable = 0;
    std::vector<std::string> hosts = sorted_host_dirs(args.offline_root);
    for (const std::string& host : hosts) {
        try {
            CapturePair pair = load_pair(args.offline_root, host);
            switch (pair.status) {
                case PairStatus::OK: ++ok; break;
                case PairStatus::Dead: ++dead; break;
                case PairStatus::Failed: ++failed; break;
            }
        } catch (const std::exception& err) {
            ++unreadable;
            std::cout << host << ": " << err.what() << "\n";
        }
    }
    std::cout << hosts.size() << " snapshot dirs: " << ok << " ok, " << dead << " dead, "
              << failed << " failed, " << unreadable << " unreadable\n";
    if (unreadable > 0) throw IoError("snapshot root holds unreadable pairs");
}

void run_capture_live(const CaptureArgs& args, const config::Config& cfg) {
    if (args.sites_file.empty()) throw ParameterError("live capture needs --sites");
    if (args.out_root.empty()) throw ParameterError("live capture needs --out");
    std::string baseline_driver = cfg.get("baseline_driver", "");
    std::string blocked_driver = cfg.get("blocked_driver", "");
    if (baseline_driver.empty() || blocked_driver.empty())
        throw ParameterError("live capture needs baseline_driver and blocked_driver in the config");

    webdriver::SessionConfig baseline{baseline_driver, "{}", std::chrono::milliseconds(30000)};
    webdriver::SessionConfig blocked{blocked_driver, "{}", std::chrono::milliseconds(30000)};
    std::string caps = cfg.get("baseline_capabilities_file", "");
    if (!caps.empty()) baseline.capabilities = read_text_file(caps);
    caps = cfg.get("blocked_capabilities_file", "");
    if (!caps.empty()) blocked.capabilities = read_text_file(caps);
    auto liveness = std::chrono::milliseconds(cfg.get_int("liveness_timeout_ms", 30000));
    baseline.request_timeout = liveness;
    blocked.request_timeout = liveness;
    auto settle = std::chrono::milliseconds(cfg.get_int("settle_delay_ms", 5000));
    std::size_t parallelism = static_cast<std::size_t>(std::max(1LL, cfg.get_int("parallelism", 4)));

    std::vector<SiteRecord> sites = read_site_list(read_text_file(args.sites_file), "capture");
    std::filesystem::create_directories(args.out_root);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> ok{0}, dead{0}, failed{0};
    std::mutex io;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < sites.size(); i = next.fetch_add(1)) {
            CapturePair pair = capture_pair(sites[i], baseline, blocked, settle);
            std::string note;
            try {
                save_pair(pair, args.out_root);
            } catch (const std::exception& err) {
                pair.status = PairStatus::Failed;
                note = err.what();
            }
            switch (pair.status) {
                case PairStatus::OK: ++ok; break;
                case PairStatus::Dead: ++dead; break;
                case PairStatus::Failed: ++failed; break;
            }
            std::lock_guard<std::mutex> lock(io);
            std::cout << "[" << (i + 1) << "/" << sites.size() << "] "
                      << normalize_host(sites[i].url) << " "
                      << (pair.status == PairStatus::OK     ? "ok"
                          : pair.status == PairStatus::Dead ? "dead"
                                                            : "failed")
                      << (pair.failure_reason.empty() ? "" : " (" + pair.failure_reason + ")")
                      << (note.empty() ? "" : " [" + note + "]") << "\n";
        }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::min(parallelism, sites.size()); ++t)
        threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    std::cout << sites.size() << " sites: " << ok << " ok, " << dead << " dead, " << failed
              << " failed -> " << args.out_root << "\n";
}

struct ExtractArgs {
    std::string snapshots;
    std::string out;
    std::string labels;
    std::string skips;
};

void run_extract(const ExtractArgs& args, const config::Config& cfg) {
    std::vector<std::string> keywords = keyword_override(cfg);
    ExtractReport extracted = keywords.empty() ? extract_corpus(args.snapshots)
                                               : extract_corpus(args.snapshots, keywords);
    if (!args.labels.empty()) {
        std::map<std::string, bool> verdicts = report::read_verification(read_text_file(args.labels));
        for (FeatureVector& row : extracted.dataset.rows) {
            auto it = verdicts.find(row.site);
            if (it != verdicts.end()) row.label = it->second ? Label::True : Label::False;
        }
    }
    write_text_file(args.out, write_dataset(extracted.dataset));
    if (!args.skips.empty()) {
        std::string csv = "host,reason\n";
        for (const SkipEntry& skip : extracted.skips)
            csv += csv_escape(skip.host) + "," + csv_escape(skip.reason) + "\n";
        write_text_file(args.skips, csv);
    }
    std::cout << "extracted " << extracted.dataset.rows.size() << " rows ("
              << extracted.skips.size() << " skipped) -> " << args.out << "\n";
}

struct RankArgs {
    std::string data;
    std::string out;
    bool as_json = false;
};

void run_rank(const RankArgs& args) {
    LabeledDataset ds = read_dataset(read_text_file(args.data));
    std::vector<ml::RankedFeature> ranked = ml::rank_features(ds);
    std::string rendered;
    if (args.as_json) {
        json doc;
        json rows = json::array();
        for (const ml::RankedFeature& feature : ranked) {
            json row;
            row["feature"] = feature.name;
            row["gain_percent"] = feature.gain_percent;
            row["threshold"] = feature.best_threshold;
            rows.push_back(std::move(row));
        }
        doc["rankings"] = std::move(rows);
        rendered = doc.dump(2) + "\n";
    } else {
        char buf[128];
        rendered = "rank  feature      gain_pct  threshold\n";
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%4zu  %-11s  %8.2f  %g\n", i + 1,
                          ranked[i].name.c_str(), ranked[i].gain_percent,
                          ranked[i].best_threshold);
            rendered += buf;
        }
    }
    if (args.out.empty())
        std::cout << rendered;
    else
        write_text_file(args.out, rendered);
}

struct TrainArgs {
    std::string data;
    std::string learner = "rf";
    std::string out;
    int min_leaf = 2;
    int n_trees = 100;
    std::vector<std::string> features;
};

void apply_feature_selection(LabeledDataset& ds, const std::vector<std::string>& features) {
    if (features.empty()) return;
    std::set<std::string> seen;
    std::vector<std::string> schema;
    for (const std::string& name : features) {
        if (std::find(kAllFeatureNames.begin(), kAllFeatureNames.end(), name) ==
            kAllFeatureNames.end())
            throw ParameterError("unknown feature '" + name + "'");
        if (!seen.insert(name).second) throw ParameterError("feature '" + name + "' given twice");
        schema.push_back(name);
    }
    ds.schema = std::move(schema);
}

void run_train(const TrainArgs& args, std::uint64_t seed) {
    if (args.out.empty()) throw ParameterError("train needs --out");
    LabeledDataset ds = read_dataset(read_text_file(args.data));
    apply_feature_selection(ds, args.features);
    ml::TrainOptions opts;
    opts.min_leaf = args.min_leaf;
    opts.n_trees = args.n_trees;
    ml::ClassifierModel model = ml::train(ds, ml::parse_learner_token(args.learner), opts, seed);
    save_model(model, args.out);
    std::size_t labeled = 0;
    for (const FeatureVector& row : ds.rows)
        if (row.label != Label::Unlabeled) ++labeled;
    std::cout << "trained " << learner_token(model.kind) << " on " << labeled << " rows -> "
              << args.out << "\n";
}

struct ClassifyArgs {
    std::string model;
    std::string data;
    std::string out;
};

void run_classify(const ClassifyArgs& args) {
    ml::ClassifierModel model = load_model(args.model);
    LabeledDataset ds = read_dataset(read_text_file(args.data));
    std::vector<report::SitePrediction> predictions;
    std::size_t flagged = 0;
    for (const FeatureVector& row : ds.rows) {
        ml::Prediction pred = ml::predict(model, row);
        if (pred.label == Label::True) ++flagged;
        predictions.push_back({row.site, pred.label, pred.score});
    }
    write_text_file(args.out, report::write_predictions(predictions));
    std::cout << "classified " << predictions.size() << " sites (" << flagged << " flagged) -> "
              << args.out << "\n";
}

struct EvaluateArgs {
    std::string data;
    std::string learner = "rf";
    int folds = 10;
    std::string out;
    std::string text;
    int min_leaf = 2;
    int n_trees = 100;
};

void run_evaluate(const EvaluateArgs& args, std::uint64_t seed) {
    LabeledDataset ds = read_dataset(read_text_file(args.data));
    ml::TrainOptions opts;
    opts.min_leaf = args.min_leaf;
    opts.n_trees = args.n_trees;
    ml::EvaluationReport rep =
        ml::cross_validate(ds, ml::parse_learner_token(args.learner), args.folds, seed, opts);
    if (!args.out.empty()) write_text_file(args.out, report_to_json(rep));
    std::string table = report_to_text(rep);
    if (!args.text.empty())
        write_text_file(args.text, table);
    else
        std::cout << table;
    long long correct = rep.confusion[0][0] + rep.confusion[1][1];
    long long total = correct + rep.confusion[0][1] + rep.confusion[1][0];
    std::cout << "accuracy " << (total > 0 ? static_cast<double>(correct) / total : 0.0) << " over "
              << total << " rows (" << args.folds << "-fold)\n";
}

struct ReportArgs {
    std::vector<std::string> predictions;
    std::string region;
    std::string verified;
    std::string out;
    std::string text;
};

void run_report(const ReportArgs& args) {
    std::map<std::string, bool> verified = report::read_verification(read_text_file(args.verified));
    std::vector<std::pair<std::string, std::vector<report::SitePrediction>>> lists;
    for (const std::string& spec : args.predictions) {
        std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
            throw ParameterError("--predictions wants name=path, got '" + spec + "'");
        lists.emplace_back(spec.substr(0, eq),
                           report::read_predictions(read_text_file(spec.substr(eq + 1))));
    }
    report::RegionReport rep = report::aggregate_region(args.region, lists, verified);
    if (!args.out.empty()) write_text_file(args.out, report::region_report_to_json(rep));
    std::string table = report::region_report_to_text(rep);
    if (!args.text.empty())
        write_text_file(args.text, table);
    else
        std::cout << table;
}

struct RespondArgs {
    std::string snapshots;
    std::string manual;
    std::string out;
};

void run_respond(const RespondArgs& args, const config::Config& cfg) {
    report::ResponseThresholds thresholds;
    thresholds.invisibility = cfg.get_double("invisibility_threshold", thresholds.invisibility);
    thresholds.availability = cfg.get_double("availability_threshold", thresholds.availability);
    std::vector<std::string> keywords = keyword_override(cfg);
    if (keywords.empty()) keywords = default_keywords();

    std::map<std::string, report::ResponseLabel> manual;
    if (!args.manual.empty()) manual = report::read_manual_labels(read_text_file(args.manual));

    std::string csv = "host,category,source,evidence\n";
    std::size_t labeled = 0, skipped = 0;
    for (const std::string& host : sorted_host_dirs(args.snapshots)) {
        CapturePair pair = load_pair(args.snapshots, host);
        std::optional<report::ResponseLabel> override;
        auto it = manual.find(host);
        if (it != manual.end()) override = it->second;
        report::ResponseLabel label;
        if (pair.status == PairStatus::OK) {
            label = report::merge_labels(
                report::label_response(pair, thresholds, keywords), override);
        } else if (override) {
            label = *override;
        } else {
            ++skipped;
            continue;
        }
        csv += host + "," + report::response_category_token(label.category) + "," +
               (label.source == report::ResponseSource::Manual ? "manual" : "heuristic") + "," +
               csv_escape(label.evidence) + "\n";
        ++labeled;
    }
    write_text_file(args.out, csv);
    std::cout << "labeled " << labeled << " sites (" << skipped << " skipped) -> " << args.out
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"A/B page-capture pipeline that detects anti-adblock walls"};
    app.require_subcommand(1);

    GlobalArgs global;
    app.add_option("--config", global.config_path, "key = value configuration file");
    app.add_option("--runlog", global.runlog_path,
                   "append one JSON line per run (empty to disable)")
        ->capture_default_str();
    CLI::Option* seed_opt =
        app.add_option("--seed", global.seed, "run seed (overrides the config)");

    SitesArgs sites_args;
    CLI::App* sites_cmd =
        app.add_subcommand("sites", "merge ranked site lists into one deduplicated list");
    sites_cmd->add_option("--awis-xml", sites_args.awis_files, "category-listings XML file");
    sites_cmd->add_option("--list", sites_args.list_files, "plain list of URLs, one per line");
    sites_cmd->add_option("--issue-page", sites_args.issue_files,
                          "issue-tracker HTML page listing reported sites");
    sites_cmd->add_option("--tag", sites_args.tag, "source tag for --list inputs")
        ->capture_default_str();
    sites_cmd->add_option("-o,--out", sites_args.out, "merged site list to write");
    sites_cmd->add_flag("--print-request", sites_args.print_request,
                        "print a category-listings query URL and exit");
    sites_cmd->add_option("--request-action", sites_args.request_action)->capture_default_str();
    sites_cmd->add_option("--request-count", sites_args.request_count)->capture_default_str();
    sites_cmd->add_option("--request-start", sites_args.request_start)->capture_default_str();
    sites_cmd->add_option("--request-path", sites_args.request_path)->capture_default_str();
    sites_cmd->add_option("--request-sort", sites_args.request_sort)->capture_default_str();

    CaptureArgs capture_args;
    CLI::App* capture_cmd = app.add_subcommand(
        "capture", "A/B-capture sites (live), validate snapshots (--offline) or plant a corpus (--synth)");
    capture_cmd->add_option("--sites", capture_args.sites_file, "site list for live capture");
    capture_cmd->add_option("--offline", capture_args.offline_root,
                            "existing snapshot root to validate");
    capture_cmd->add_flag("--synth", capture_args.synth, "generate a synthetic corpus");
    capture_cmd->add_option("--out", capture_args.out_root, "snapshot root to write");
    capture_cmd->add_option("--pairs", capture_args.pairs, "synthetic pairs")->capture_default_str();
    capture_cmd->add_option("--walls", capture_args.walls, "synthetic anti-adblock walls")
        ->capture_default_str();
    capture_cmd->add_option("--dead", capture_args.dead, "synthetic dead sites")
        ->capture_default_str();

    ExtractArgs extract_args;
    CLI::App* extract_cmd =
        app.add_subcommand("extract", "diff snapshot pairs into a feature CSV");
    extract_cmd->add_option("--snapshots", extract_args.snapshots, "snapshot root")->required();
    extract_cmd->add_option("--out", extract_args.out, "feature CSV to write")->required();
    extract_cmd->add_option("--labels", extract_args.labels, "host,verdict CSV to label rows");
    extract_cmd->add_option("--skips", extract_args.skips, "write skipped hosts to this CSV");

    RankArgs rank_args;
    CLI::App* rank_cmd = app.add_subcommand("rank", "rank features by information gain");
    rank_cmd->add_option("--data", rank_args.data, "feature CSV")->required();
    rank_cmd->add_option("--out", rank_args.out, "write here instead of stdout");
    rank_cmd->add_flag("--json", rank_args.as_json, "emit JSON instead of a table");

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "fit a classifier and save the model");
    train_cmd->add_option("--data", train_args.data, "labeled feature CSV")->required();
    train_cmd->add_option("--learner", train_args.learner, "nb, j48 or rf")
        ->capture_default_str();
    train_cmd->add_option("--out", train_args.out, "model file to write")->required();
    train_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum rows per tree leaf")
        ->capture_default_str();
    train_cmd->add_option("--trees", train_args.n_trees, "forest size")->capture_default_str();
    train_cmd->add_option("--features", train_args.features,
                          "train on this feature subset only")
        ->delimiter(',');

    ClassifyArgs classify_args;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "score sites with a saved model");
    classify_cmd->add_option("--model", classify_args.model, "model file")->required();
    classify_cmd->add_option("--data", classify_args.data, "feature CSV")->required();
    classify_cmd->add_option("--out", classify_args.out, "prediction CSV to write")->required();

    EvaluateArgs evaluate_args;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "stratified cross-validation with a full metric table");
    evaluate_cmd->add_option("--data", evaluate_args.data, "labeled feature CSV")->required();
    evaluate_cmd->add_option("--learner", evaluate_args.learner, "nb, j48 or rf")
        ->capture_default_str();
    evaluate_cmd->add_option("--cv", evaluate_args.folds, "number of folds")
        ->capture_default_str();
    evaluate_cmd->add_option("--out", evaluate_args.out, "report JSON to write");
    evaluate_cmd->add_option("--text", evaluate_args.text, "metric table to write");
    evaluate_cmd->add_option("--min-leaf", evaluate_args.min_leaf)->capture_default_str();
    evaluate_cmd->add_option("--trees", evaluate_args.n_trees)->capture_default_str();

    ReportArgs report_args;
    CLI::App* report_cmd =
        app.add_subcommand("report", "aggregate verified predictions into a regional table");
    report_cmd->add_option("--predictions", report_args.predictions, "name=prediction-csv")
        ->required();
    report_cmd->add_option("--region", report_args.region, "region label")->required();
    report_cmd->add_option("--verified", report_args.verified, "host,verdict CSV")->required();
    report_cmd->add_option("--out", report_args.out, "report JSON to write");
    report_cmd->add_option("--text", report_args.text, "write the table here instead of stdout");

    RespondArgs respond_args;
    CLI::App* respond_cmd = app.add_subcommand(
        "respond", "label how each captured site reacts to blocking (cost/invisibility/availability)");
    respond_cmd->add_option("--snapshots", respond_args.snapshots, "snapshot root")->required();
    respond_cmd->add_option("--manual", respond_args.manual, "host,category sidecar overriding heuristics");
    respond_cmd->add_option("--out", respond_args.out, "response CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    global.seed_set = seed_opt->count() > 0;

    std::string stage = app.get_subcommands().front()->get_name();
    auto started = std::chrono::steady_clock::now();
    json log;
    log["command"] = stage;
    try {
        config::Config cfg = load_config(global);
        std::uint64_t seed = effective_seed(global, cfg);
        log["seed"] = seed;
        if (sites_cmd->parsed()) run_sites(sites_args);
        if (capture_cmd->parsed()) {
            if (capture_args.synth)
                run_capture_synth(capture_args, seed, cfg);
            else if (!capture_args.offline_root.empty())
                run_capture_offline(capture_args);
            else
                run_capture_live(capture_args, cfg);
        }
        if (extract_cmd->parsed()) run_extract(extract_args, cfg);
        if (rank_cmd->parsed()) run_rank(rank_args);
        if (train_cmd->parsed()) run_train(train_args, seed);
        if (classify_cmd->parsed()) run_classify(classify_args);
        if (evaluate_cmd->parsed()) run_evaluate(evaluate_args, seed);
        if (report_cmd->parsed()) run_report(report_args);
        if (respond_cmd->parsed()) run_respond(respond_args, cfg);
        log["status"] = "ok";
    } catch (const std::exception& err) {
        log["status"] = "error";
        log["stage"] = stage;
        log["error"] = err.what();
        log["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        append_runlog(global.runlog_path, log);
        std::cerr << "error [" << stage << "]: " << err.what() << "\n";
        return 1;
    }
    log["duration_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    append_runlog(global.runlog_path, log);
    return 0;
}
