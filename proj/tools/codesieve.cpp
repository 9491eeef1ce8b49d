// codesieve command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 external tool error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "codesieve/codesieve.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace codesieve;

namespace {

struct Options {
    std::string command;
    std::string config;
    std::string corpus;
    std::vector<std::string> ext{"*.java"};
    std::string index_path;

    std::string model = "bm25";
    double k = 1.2;
    double b = 0.75;
    double mu = 1500.0;
    bool standard_bm25 = false;
    std::size_t top_n = 5;

    std::size_t min_match = default_min_match;
    double tau = default_threshold;
    std::size_t threads = 1;

    std::string verifier = "native";
    std::string verify_cmd;
    std::string verify_pattern = ExternalVerifier{}.pattern;

    std::string output;
    std::string format;
    std::string manifest;
    bool all_pairs = false;
    bool compare_baseline = false;
    bool verify = false;
    bool with_accuracy = false;

    std::string qrels;
    std::vector<std::size_t> n_values{1, 2, 3, 5, 10};
    std::vector<std::string> models{"bm25", "ql", "dfr"};
    std::vector<double> k_values;
    std::vector<double> b_values;
    std::vector<double> mu_values;

    std::string out_dir;
    std::size_t docs = 100;
    std::size_t pairs = 10;
    std::vector<std::string> transforms{"all"};
    std::uint64_t seed = 1;
};

// ---- argument parsing ----------------------------------------------------

void add_common(CLI::App& sub, Options& o)
{
    sub.add_option("--config", o.config, "key=value settings file; command-line flags take precedence")
        ->check(CLI::ExistingFile);
    sub.add_option("-o,--output", o.output, "output file (default: stdout)");
    sub.add_option("--format", o.format, "csv or json (default: from output extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--manifest", o.manifest, "run manifest path (default: <output>.manifest.json)");
    sub.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 1024));
}

void add_corpus(CLI::App& sub, Options& o)
{
    sub.add_option("corpus", o.corpus, "corpus directory")->required();
    sub.add_option("--ext", o.ext, "file filters, e.g. *.java")->delimiter(',');
}

void add_model(CLI::App& sub, Options& o)
{
    sub.add_option("--model", o.model, "bm25, ql or dfr")->check(CLI::IsMember({"bm25", "ql", "dirichlet", "dfr"}));
    sub.add_option("--k", o.k, "BM25 k");
    sub.add_option("--b", o.b, "BM25 b");
    sub.add_option("--mu", o.mu, "Dirichlet mu");
    sub.add_flag("--standard-bm25", o.standard_bm25, "multiply the length norm by k (textbook BM25)");
}

void add_gst(CLI::App& sub, Options& o)
{
    sub.add_option("--min-match", o.min_match, "minimum tile length")->check(CLI::PositiveNumber);
    sub.add_option("--tau", o.tau, "similarity threshold for flagging")->check(CLI::Range(0.0, 1.0));
}

void build_app(CLI::App& app, Options& o)
{
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* index = app.add_subcommand("index", "tokenize a corpus and write its inverted index");
    add_corpus(*index, o);
    add_common(*index, o);

    auto* detect = app.add_subcommand("detect", "retrieve top-n candidates per file and verify them");
    add_corpus(*detect, o);
    add_common(*detect, o);
    add_model(*detect, o);
    add_gst(*detect, o);
    detect->add_option("--index", o.index_path, "reuse an index built by 'codesieve index'");
    detect->add_option("--top-n", o.top_n, "candidates per query file")->check(CLI::PositiveNumber);
    detect->add_option("--verifier", o.verifier, "native or external")->check(CLI::IsMember({"native", "external"}));
    detect->add_option("--verify-cmd", o.verify_cmd, "external command with {a} and {b} placeholders");
    detect->add_option("--verify-pattern", o.verify_pattern, "regex; group 1 is the similarity percentage");
    detect->add_flag("--all-pairs", o.all_pairs, "write every verified pair, not only flagged ones");
    detect->add_flag("--compare-baseline", o.compare_baseline, "also run all-pairs GST; report accuracy and speedup");
    detect->add_option("--qrels", o.qrels, "report candidate precision/recall against these judgements");

    auto* baseline = app.add_subcommand("baseline", "verify every pair with GST");
    add_corpus(*baseline, o);
    add_common(*baseline, o);
    add_gst(*baseline, o);
    baseline->add_flag("--all-pairs", o.all_pairs, "write every verified pair, not only flagged ones");

    auto* eval = app.add_subcommand("eval", "precision/recall per top-n against qrels");
    add_corpus(*eval, o);
    add_common(*eval, o);
    add_model(*eval, o);
    add_gst(*eval, o);
    eval->add_option("--qrels", o.qrels, "relevance judgements")->required();
    eval->add_option("--n-values", o.n_values, "ascending top-n values")->delimiter(',');
    eval->add_flag("--verify", o.verify, "run verification per row and record its timing");
    eval->add_flag("--accuracy", o.with_accuracy, "also report accuracy against the all-pairs baseline");

    auto* sweep = app.add_subcommand("sweep", "grid search over models, parameters and top-n");
    add_corpus(*sweep, o);
    add_common(*sweep, o);
    add_gst(*sweep, o);
    sweep->add_option("--qrels", o.qrels, "relevance judgements (default: baseline flagged pairs)");
    sweep->add_option("--models", o.models, "models to include")->delimiter(',');
    sweep->add_option("--k-values", o.k_values, "BM25 k grid")->delimiter(',');
    sweep->add_option("--b-values", o.b_values, "BM25 b grid")->delimiter(',');
    sweep->add_option("--mu-values", o.mu_values, "Dirichlet mu grid")->delimiter(',');
    sweep->add_option("--n-values", o.n_values, "ascending top-n values")->delimiter(',');
    sweep->add_flag("--standard-bm25", o.standard_bm25, "multiply the length norm by k (textbook BM25)");
    sweep->add_flag("--accuracy", o.with_accuracy, "also report accuracy against the all-pairs baseline");

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus with planted clone pairs");
    gen->add_option("out_dir", o.out_dir, "output directory")->required();
    gen->add_option("--config", o.config, "key=value settings file")->check(CLI::ExistingFile);
    gen->add_option("--manifest", o.manifest, "run manifest path (default: <out_dir>/manifest.json)");
    gen->add_option("--docs", o.docs, "number of files")->check(CLI::PositiveNumber);
    gen->add_option("--pairs", o.pairs, "planted pairs");
    gen->add_option("--transforms", o.transforms, "rename, literal, comment, reorder or all")->delimiter(',');
    gen->add_option("--seed", o.seed, "random seed");
}

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

auto read_config(std::string const& path) -> std::vector<ConfigEntry>
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot read config file: " + path);
    }
    auto trim = [](std::string s) {
        auto first = s.find_first_not_of(" \t\r");
        auto last = s.find_last_not_of(" \t\r");
        return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    };
    std::vector<ConfigEntry> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
        }
        out.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), n});
    }
    return out;
}

auto parse_args(std::vector<std::string> args, CLI::App& app) -> void
{
    std::reverse(args.begin(), args.end());
    app.parse(args);
}

/// Parses once to find the command and config file, then re-parses with
/// config values appended for every option the command line left unset.
auto parse_command_line(int argc, char** argv, Options& o) -> std::optional<int>
{
    std::vector<std::string> args(argv + 1, argv + argc);
    CLI::App app{"Source-code plagiarism detection with retrieval pre-filtering", "codesieve"};
    build_app(app, o);
    try {
        parse_args(args, app);
    } catch (CLI::ParseError const& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    auto* sub = app.get_subcommands().front();
    o.command = sub->get_name();
    if (o.config.empty()) {
        return std::nullopt;
    }

    std::vector<std::string> extra;
    for (auto const& entry : read_config(o.config)) {
        auto flag = "--" + entry.key;
        if (entry.key == "config") {
            throw UsageError(o.config + ":" + std::to_string(entry.line) + ": config files cannot include others");
        }
        auto* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr) {
            bool known = false;
            for (auto const* other : app.get_subcommands({})) {
                known = known || other->get_option_no_throw(flag) != nullptr;
            }
            if (!known) {
                throw UsageError(o.config + ":" + std::to_string(entry.line) + ": unknown setting '" + entry.key + "'");
            }
            continue;  // meant for another command
        }
        if (opt->count() == 0) {
            extra.push_back(flag + "=" + entry.value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());

    o = Options{};
    CLI::App again{"Source-code plagiarism detection with retrieval pre-filtering", "codesieve"};
    build_app(again, o);
    try {
        parse_args(args, again);
    } catch (CLI::ParseError const& e) {
        std::cerr << "codesieve: in " << args.back() << " (from config): " << e.what() << '\n';
        return 1;
    }
    o.command = again.get_subcommands().front()->get_name();
    return std::nullopt;
}

// ---- helpers -------------------------------------------------------------

auto model_spec(Options const& o) -> ModelSpec
{
    ModelSpec s;
    s.model = parse_model(o.model);
    s.bm25 = {o.k, o.b, !o.standard_bm25};
    s.dirichlet = {o.mu};
    s.validate();
    return s;
}

auto gst_settings(Options const& o) -> GstSettings { return {o.min_match, o.tau}; }

auto wants_json(Options const& o) -> bool
{
    if (!o.format.empty()) {
        return o.format == "json";
    }
    return fs::path(o.output).extension() == ".json";
}

void emit(Options const& o, std::string const& text)
{
    if (o.output.empty() || o.output == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        throw DataError("cannot write output file: " + o.output);
    }
}

auto manifest_path(Options const& o) -> std::string
{
    if (!o.manifest.empty()) {
        return o.manifest;
    }
    if (o.command == "gen") {
        return (fs::path(o.out_dir) / "manifest.json").string();
    }
    if (o.output.empty() || o.output == "-") {
        return "codesieve-run.json";
    }
    return o.output + ".manifest.json";
}

auto file_hash(std::string const& path) -> std::string
{
    auto text = read_file(path);
    if (!text) {
        throw DataError("cannot read " + path);
    }
    return hex64(fnv1a64(*text));
}

void write_manifest(Options const& o, std::vector<std::string> const& argv, json settings, json inputs, json outputs,
                    json summary)
{
    json m;
    m["tool"] = "codesieve";
    m["manifest_version"] = 1;
    m["command"] = o.command;
    m["argv"] = argv;
    m["settings"] = std::move(settings);
    m["inputs"] = std::move(inputs);
    m["outputs"] = std::move(outputs);
    m["summary"] = std::move(summary);
    auto path = manifest_path(o);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << m.dump(2) << '\n') || !out.flush()) {
        throw DataError("cannot write run manifest: " + path);
    }
}

auto model_settings(ModelSpec const& s) -> json
{
    json j;
    j["model"] = to_string(s.model);
    j["k"] = s.bm25.k;
    j["b"] = s.bm25.b;
    j["faithful_bm25"] = s.bm25.faithful_denominator;
    j["mu"] = s.dirichlet.mu;
    return j;
}

auto gst_json(GstSettings const& g) -> json { return {{"min_match", g.min_match}, {"tau", g.threshold}}; }

auto timing_json(RunTiming const& t) -> json
{
    return {{"pairs_verified", t.pairs_verified},
            {"retrieval_s", t.retrieval_seconds},
            {"verification_s", t.verification_seconds},
            {"total_s", t.total_seconds}};
}

auto load_corpus(Options const& o) -> Corpus
{
    auto corpus = ingest_corpus(o.corpus, o.ext);
    for (auto const& s : corpus.streams) {
        for (auto const& w : s.warnings) {
            std::cerr << "warning: " << s.source_path << ": " << w << '\n';
        }
    }
    if (!corpus.empty_files.empty()) {
        std::cerr << "warning: skipped " << corpus.empty_files.size() << " file(s) without tokens\n";
    }
    if (!corpus.unreadable_files.empty()) {
        std::cerr << "warning: skipped " << corpus.unreadable_files.size() << " unreadable file(s)\n";
        for (auto const& f : corpus.unreadable_files) {
            std::cerr << "  " << f << '\n';
        }
    }
    return corpus;
}

auto corpus_inputs(Options const& o, Corpus const& c) -> json
{
    json files = json::object();
    for (auto const& [path, hash] : c.hashes) {
        files[path] = hash;
    }
    json j;
    j["corpus"] = o.corpus;
    j["extensions"] = o.ext;
    j["files"] = std::move(files);
    j["empty_files"] = c.empty_files;
    j["unreadable_files"] = c.unreadable_files;
    if (!o.qrels.empty()) {
        j["qrels"] = {{"path", o.qrels}, {"hash", file_hash(o.qrels)}};
    }
    if (!o.index_path.empty()) {
        j["index"] = {{"path", o.index_path}, {"hash", file_hash(o.index_path)}};
    }
    return j;
}

auto load_qrels(Options const& o, Corpus const& c) -> Qrels
{
    std::vector<std::string> warnings;
    auto q = parse_qrels(fs::path(o.qrels), [&](std::string_view n) { return c.resolve(n); }, &warnings);
    for (auto const& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (q.relevant.empty()) {
        throw DataError("qrels file has no usable pairs: " + o.qrels);
    }
    return q;
}

auto index_for(Options const& o, Corpus const& c) -> CorpusIndex
{
    if (o.index_path.empty()) {
        return build_index(c.streams);
    }
    auto ix = load_index(o.index_path);
    bool matches = ix.n_docs() == c.streams.size();
    for (auto const& s : c.streams) {
        matches = matches && ix.contains(s.doc_id) && ix.doc_path(s.doc_id) == s.source_path;
    }
    if (!matches) {
        throw DataError("index " + o.index_path + " does not match corpus " + o.corpus + "; rebuild it");
    }
    return ix;
}

auto path_lookup(Corpus const& c) -> PathLookup
{
    return [&c](DocId id) { return c.path_of(id); };
}

auto pairs_report(Options const& o, std::vector<VerifiedPair> const& pairs, CandidatePairSet const& candidates,
                  Corpus const& c) -> std::string
{
    if (wants_json(o)) {
        return pairs_json(pairs, candidates, path_lookup(c)).dump(2) + "\n";
    }
    return pairs_csv(pairs, candidates, path_lookup(c));
}

auto selected(DetectionResult const& r, bool all) -> std::vector<VerifiedPair> const&
{
    return all ? r.verified : r.flagged;
}

auto rows_report(Options const& o, std::vector<EvalRow> const& rows) -> std::string
{
    return wants_json(o) ? eval_rows_json(rows).dump(2) + "\n" : eval_rows_csv(rows);
}

auto fixed(double v) -> std::string { return format_fixed(v); }

// ---- commands ------------------------------------------------------------

auto cmd_index(Options const& o, std::vector<std::string> const& argv) -> int
{
    if (o.output.empty() || o.output == "-") {
        throw UsageError("index needs -o <index file>");
    }
    auto corpus = load_corpus(o);
    auto ix = build_index(corpus.streams);
    save_index(ix, o.output);
    std::cerr << "indexed " << ix.n_docs() << " files, " << ix.vocabulary_size() << " terms, " << ix.total_tokens()
              << " tokens\n";
    json summary{{"n_docs", ix.n_docs()}, {"vocabulary", ix.vocabulary_size()}, {"total_tokens", ix.total_tokens()},
                 {"avg_len", ix.avg_len()}};
    write_manifest(o, argv, json::object(), corpus_inputs(o, corpus), {{"index", o.output}}, std::move(summary));
    return 0;
}

auto external_report(Options const& o, std::vector<ExternalOutcome> const& outcomes,
                     CandidatePairSet const& candidates, Corpus const& c) -> std::string
{
    if (wants_json(o)) {
        auto arr = json::array();
        for (auto const& r : outcomes) {
            if (!o.all_pairs && !(r.verified() && *r.similarity >= o.tau)) {
                continue;
            }
            json j;
            j["doc_a"] = c.path_of(r.pair.low);
            j["doc_b"] = c.path_of(r.pair.high);
            j["similarity"] = r.similarity ? json(*r.similarity) : json(nullptr);
            j["rank"] = candidates.best_rank(r.pair);
            if (!r.verified()) {
                j["error"] = r.error;
            }
            arr.push_back(std::move(j));
        }
        return arr.dump(2) + "\n";
    }
    std::string out = "doc_a,doc_b,similarity,rank,error\r\n";
    for (auto const& r : outcomes) {
        if (!o.all_pairs && !(r.verified() && *r.similarity >= o.tau)) {
            continue;
        }
        out += csv_field(c.path_of(r.pair.low)) + ',' + csv_field(c.path_of(r.pair.high)) + ',';
        out += (r.similarity ? fixed(*r.similarity) : "") + ',';
        out += std::to_string(candidates.best_rank(r.pair)) + ',' + csv_field(r.error) + "\r\n";
    }
    return out;
}

auto cmd_detect(Options const& o, std::vector<std::string> const& argv) -> int
{
    auto spec = model_spec(o);
    auto gst = gst_settings(o);
    bool const external = o.verifier == "external";
    if (external && o.verify_cmd.empty()) {
        throw UsageError("--verifier external needs --verify-cmd");
    }
    if (external && o.compare_baseline) {
        throw UsageError("--compare-baseline works with the native verifier only");
    }
    auto corpus = load_corpus(o);
    auto ix = index_for(o, corpus);

    json settings = model_settings(spec);
    settings["top_n"] = o.top_n;
    settings["gst"] = gst_json(gst);
    settings["threads"] = o.threads;
    settings["verifier"] = o.verifier;
    settings["all_pairs"] = o.all_pairs;
    json summary;
    int rc = 0;

    std::optional<DetectionResult> run;
    if (external) {
        auto start = std::chrono::steady_clock::now();
        auto candidates = generate_candidates(ix, spec, o.top_n, o.threads);
        auto retrieval = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto root = fs::path(o.corpus);
        auto outcomes = external_verify(candidates.pair_list(),
                                        [&](DocId d) { return (root / corpus.path_of(d)).string(); },
                                        {o.verify_cmd, o.verify_pattern});
        auto total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::size_t failed = 0;
        std::size_t flagged = 0;
        for (auto const& r : outcomes) {
            if (!r.verified()) {
                ++failed;
                std::cerr << "error: " << corpus.path_of(r.pair.low) << " " << corpus.path_of(r.pair.high) << ": "
                          << r.error << '\n';
            } else if (*r.similarity >= o.tau) {
                ++flagged;
            }
        }
        emit(o, external_report(o, outcomes, candidates, corpus));
        settings["verify_cmd"] = o.verify_cmd;
        settings["verify_pattern"] = o.verify_pattern;
        summary = {{"candidates", candidates.size()}, {"flagged", flagged},   {"unverified", failed},
                   {"retrieval_s", retrieval},         {"total_s", total}};
        std::cerr << candidates.size() << " candidate pairs, " << flagged << " flagged, " << failed << " unverified\n";
        if (failed > 0) {
            rc = ExternalToolError("").exit_code();
        }
    } else {
        run = run_pipeline(ix, corpus.symbols(), spec, o.top_n, gst, o.threads);
        emit(o, pairs_report(o, selected(*run, o.all_pairs), run->candidates, corpus));
        summary = timing_json(run->timing);
        summary["candidates"] = run->candidates.size();
        summary["flagged"] = run->flagged.size();
        std::cerr << run->candidates.size() << " candidate pairs, " << run->flagged.size() << " flagged; retrieval "
                  << fixed(run->timing.retrieval_seconds) << " s, verification "
                  << fixed(run->timing.verification_seconds) << " s, total " << fixed(run->timing.total_seconds)
                  << " s\n";
    }

    if (!o.qrels.empty()) {
        auto q = load_qrels(o, corpus);
        PairSet retrieved;
        if (run) {
            retrieved = run->candidates.pairs();
        } else {
            retrieved = generate_candidates(ix, spec, o.top_n, o.threads).pairs();
        }
        auto pr = precision_recall(retrieved, q.relevant);
        summary["precision"] = pr.precision ? json(*pr.precision) : json(nullptr);
        summary["recall"] = pr.recall;
        summary["qrels_dropped"] = q.dropped;
        std::cerr << "candidate precision " << format_optional(pr.precision) << ", recall " << fixed(pr.recall)
                  << '\n';
    }

    if (o.compare_baseline) {
        auto base = run_baseline(corpus.symbols(), gst, o.threads);
        auto speedup = speedup_percent(base.timing.total_seconds, run->timing.total_seconds);
        json b = timing_json(base.timing);
        b["flagged"] = base.flagged.size();
        summary["baseline"] = std::move(b);
        summary["speedup_percent"] = speedup;
        std::cerr << "baseline: " << base.timing.pairs_verified << " pairs, " << base.flagged.size()
                  << " flagged, total " << fixed(base.timing.total_seconds) << " s\n";
        if (!base.flagged.empty()) {
            auto acc = accuracy(run->flagged_pairs(), base.flagged_pairs());
            summary["accuracy"] = acc;
            std::cerr << "accuracy " << fixed(acc) << '\n';
        } else {
            summary["accuracy"] = nullptr;
            std::cerr << "accuracy undefined: baseline flagged nothing\n";
        }
        std::cerr << "speedup_percent " << format_fixed(speedup, 1) << '\n';
    }

    write_manifest(o, argv, std::move(settings), corpus_inputs(o, corpus), {{"pairs", o.output}}, std::move(summary));
    return rc;
}

auto cmd_baseline(Options const& o, std::vector<std::string> const& argv) -> int
{
    auto gst = gst_settings(o);
    auto corpus = load_corpus(o);
    auto base = run_baseline(corpus.symbols(), gst, o.threads);
    emit(o, pairs_report(o, selected(base, o.all_pairs), CandidatePairSet{}, corpus));
    auto summary = timing_json(base.timing);
    summary["flagged"] = base.flagged.size();
    std::cerr << base.timing.pairs_verified << " pairs verified, " << base.flagged.size() << " flagged, total "
              << fixed(base.timing.total_seconds) << " s\n";
    json settings{{"gst", gst_json(gst)}, {"threads", o.threads}, {"all_pairs", o.all_pairs}};
    write_manifest(o, argv, std::move(settings), corpus_inputs(o, corpus), {{"pairs", o.output}}, std::move(summary));
    return 0;
}

void print_row(char const* label, EvalRow const& r)
{
    std::cerr << label << to_string(r.spec.model);
    if (r.spec.model == Model::bm25) {
        std::cerr << " k=" << r.spec.bm25.k << " b=" << r.spec.bm25.b;
    } else if (r.spec.model == Model::ql) {
        std::cerr << " mu=" << r.spec.dirichlet.mu;
    }
    std::cerr << " top_n=" << r.top_n << " recall=" << fixed(r.recall) << " pairs=" << r.pairs_retrieved << '\n';
}

auto row_json(EvalRow const& r) -> json { return eval_rows_json({r}).front(); }

auto cmd_eval(Options const& o, std::vector<std::string> const& argv) -> int
{
    auto spec = model_spec(o);
    auto gst = gst_settings(o);
    auto corpus = load_corpus(o);
    auto ix = build_index(corpus.streams);
    auto q = load_qrels(o, corpus);

    std::vector<EvalRow> rows;
    if (o.verify || o.with_accuracy) {
        GroundTruth truth{q.relevant, std::nullopt};
        if (o.with_accuracy) {
            auto base = run_baseline(corpus.symbols(), gst, o.threads);
            if (base.flagged.empty()) {
                throw DataError("baseline flagged no pairs; accuracy is undefined");
            }
            truth.baseline_flagged = base.flagged_pairs();
        }
        rows = sweep(ix, corpus.symbols(), {spec}, o.n_values, truth, gst, o.threads);
    } else {
        rows = pr_curve(ix, spec, q.relevant, o.n_values, o.threads);
    }
    emit(o, rows_report(o, rows));

    json summary{{"rows", rows.size()}, {"qrels_pairs", q.relevant.size()}, {"qrels_dropped", q.dropped}};
    if (auto full = first_full_recall(rows)) {
        summary["first_full_recall"] = row_json(rows[*full]);
        print_row("full recall first reached by: ", rows[*full]);
    } else {
        summary["first_full_recall"] = nullptr;
        std::cerr << "recall 1.0 not reached\n";
    }
    json settings = model_settings(spec);
    settings["n_values"] = o.n_values;
    settings["gst"] = gst_json(gst);
    settings["verify"] = o.verify || o.with_accuracy;
    settings["threads"] = o.threads;
    write_manifest(o, argv, std::move(settings), corpus_inputs(o, corpus), {{"rows", o.output}}, std::move(summary));
    return 0;
}

auto sweep_grid(Options const& o) -> std::vector<ModelSpec>
{
    auto ks = o.k_values.empty() ? std::vector<double>{o.k} : o.k_values;
    auto bs = o.b_values.empty() ? std::vector<double>{o.b} : o.b_values;
    auto mus = o.mu_values.empty() ? std::vector<double>{o.mu} : o.mu_values;
    std::vector<ModelSpec> grid;
    for (auto const& name : o.models) {
        ModelSpec base;
        base.model = parse_model(name);
        base.bm25.faithful_denominator = !o.standard_bm25;
        switch (base.model) {
        case Model::bm25:
            for (auto k : ks) {
                for (auto b : bs) {
                    auto s = base;
                    s.bm25.k = k;
                    s.bm25.b = b;
                    grid.push_back(s);
                }
            }
            break;
        case Model::ql:
            for (auto mu : mus) {
                auto s = base;
                s.dirichlet.mu = mu;
                grid.push_back(s);
            }
            break;
        case Model::dfr: grid.push_back(base); break;
        }
    }
    for (auto const& s : grid) {
        s.validate();
    }
    return grid;
}

auto cmd_sweep(Options const& o, std::vector<std::string> const& argv) -> int
{
    auto gst = gst_settings(o);
    auto grid = sweep_grid(o);
    auto corpus = load_corpus(o);
    auto ix = build_index(corpus.streams);

    GroundTruth truth;
    std::string truth_source;
    if (o.qrels.empty() || o.with_accuracy) {
        auto base = run_baseline(corpus.symbols(), gst, o.threads);
        if (base.flagged.empty()) {
            throw DataError("baseline flagged no pairs; nothing to measure against");
        }
        truth.baseline_flagged = base.flagged_pairs();
        truth.relevant = *truth.baseline_flagged;
        truth_source = "baseline";
    }
    if (!o.qrels.empty()) {
        truth.relevant = load_qrels(o, corpus).relevant;
        truth_source = "qrels";
    }
    auto rows = sweep(ix, corpus.symbols(), grid, o.n_values, truth, gst, o.threads);
    emit(o, rows_report(o, rows));

    json summary{{"rows", rows.size()}, {"truth", truth_source}};
    auto best = best_row(rows);
    summary["best"] = row_json(rows[*best]);
    print_row("best: ", rows[*best]);
    json settings;
    settings["models"] = o.models;
    settings["k_values"] = o.k_values.empty() ? std::vector<double>{o.k} : o.k_values;
    settings["b_values"] = o.b_values.empty() ? std::vector<double>{o.b} : o.b_values;
    settings["mu_values"] = o.mu_values.empty() ? std::vector<double>{o.mu} : o.mu_values;
    settings["faithful_bm25"] = !o.standard_bm25;
    settings["n_values"] = o.n_values;
    settings["gst"] = gst_json(gst);
    settings["threads"] = o.threads;
    write_manifest(o, argv, std::move(settings), corpus_inputs(o, corpus), {{"rows", o.output}}, std::move(summary));
    return 0;
}

auto cmd_gen(Options const& o, std::vector<std::string> const& argv) -> int
{
    PlantSpec spec;
    spec.n_docs = o.docs;
    spec.n_plag_pairs = o.pairs;
    spec.seed = o.seed;
    spec.transforms.clear();
    for (auto const& t : o.transforms) {
        if (t == "all") {
            spec.transforms = all_transforms();
        } else {
            spec.transforms.insert(parse_transform(t));
        }
    }
    auto manifest = generate(spec, o.out_dir);
    std::cerr << "wrote " << manifest.doc_paths.size() << " files and " << manifest.planted.size()
              << " planted pairs to " << o.out_dir << '\n';
    std::vector<std::string> names;
    for (auto t : spec.transforms) {
        names.emplace_back(to_string(t));
    }
    json settings{{"docs", o.docs}, {"pairs", o.pairs}, {"transforms", names}, {"seed", o.seed}};
    json planted = json::array();
    for (auto const& [a, b] : manifest.planted) {
        planted.push_back({a, b});
    }
    json outputs{{"dir", o.out_dir}, {"files", manifest.doc_paths}, {"qrels", manifest.qrels_path}};
    write_manifest(o, argv, std::move(settings), json::object(), std::move(outputs), {{"planted", std::move(planted)}});
    return 0;
}

auto dispatch(Options const& o, std::vector<std::string> const& argv) -> int
{
    if (o.command == "index") {
        return cmd_index(o, argv);
    }
    if (o.command == "detect") {
        return cmd_detect(o, argv);
    }
    if (o.command == "baseline") {
        return cmd_baseline(o, argv);
    }
    if (o.command == "eval") {
        return cmd_eval(o, argv);
    }
    if (o.command == "sweep") {
        return cmd_sweep(o, argv);
    }
    return cmd_gen(o, argv);
}

}  // namespace

auto main(int argc, char** argv) -> int
{
    try {
        Options o;
        if (auto rc = parse_command_line(argc, argv, o)) {
            return *rc;
        }
        return dispatch(o, std::vector<std::string>(argv, argv + argc));
    } catch (Error const& e) {
        std::cerr << "codesieve: " << e.what() << '\n';
        return e.exit_code();
    } catch (std::exception const& e) {
        std::cerr << "codesieve: " << e.what() << '\n';
        return 2;
    }
}
