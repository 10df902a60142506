// kgforge: curriculum knowledge-graph toolkit CLI.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>

#include "kgforge/audit/audit.hpp"
#include "kgforge/bench/generator.hpp"
#include "kgforge/core/jsonl.hpp"
#include "kgforge/eval/harness.hpp"
#include "kgforge/fixture/synthetic.hpp"
#include "kgforge/graph/serialize.hpp"
#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/manifest.hpp"
#include "kgforge/ingest/prompts.hpp"
#include "kgforge/ingest/section_graph.hpp"
#include "kgforge/merge/merge.hpp"
#include "kgforge/pipeline/pipeline.hpp"
#include "kgforge/stats/stats.hpp"
#include "kgforge/synth/qa.hpp"
#include "kgforge/validate/validator.hpp"

namespace fs = std::filesystem;
using namespace kgforge;

namespace {

int g_log_level = 1; // 0 quiet, 1 info

void info(const std::string& msg) {
    if (g_log_level >= 1) fprintf(stderr, "[kgforge] %s\n", msg.c_str());
}

[[noreturn]] void die(const Error& err) {
    fprintf(stderr, "error: %s\n", err.to_string().c_str());
    exit(1);
}

template <typename T>
T unwrap(Result<T> r) {
    if (!r.ok()) die(r.error());
    return std::move(r).value();
}

void unwrap(const Status& st) {
    if (!st.ok()) die(st.error());
}

nlohmann::json load_json(const fs::path& path) {
    auto text = unwrap(jsonl::read_text_file(path));
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) die(make_error(Errc::malformed_document, path.string()));
    return doc;
}

std::vector<fs::path> graphs_in(const std::string& in) {
    std::vector<fs::path> paths;
    fs::path p(in);
    if (fs::is_directory(p)) {
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.path().string().find(".graph.json") != std::string::npos) {
                paths.push_back(entry.path());
            }
        }
        std::sort(paths.begin(), paths.end());
    } else {
        paths.push_back(p);
    }
    return paths;
}

std::unique_ptr<model::ModelClient> make_client(const std::string& kind,
                                                const std::string& endpoint,
                                                const std::string& model_name, uint64_t seed,
                                                model::StubModelClient::Responder responder) {
    if (kind == "http") {
        const char* key = getenv("KGFORGE_API_KEY");
        return std::make_unique<model::HttpModelClient>(endpoint, model_name,
                                                        key ? key : std::string{});
    }
    return std::make_unique<model::StubModelClient>(seed, std::move(responder));
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// string fields of a JSONL record, concatenated; the document view used by
// the overlap audit
std::string record_text(const nlohmann::json& doc) {
    std::string out;
    std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& node) {
        if (node.is_string()) {
            out += node.get<std::string>();
            out += '\n';
        } else if (node.is_object() || node.is_array()) {
            for (const auto& child : node) walk(child);
        }
    };
    walk(doc);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curriculum knowledge-graph toolkit: build graphs, derive benchmarks and "
                 "training data, evaluate models"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    std::string config_path;
    std::string log_level = "info";
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--config", config_path, "pipeline config JSON");
    app.add_option("--log-level", log_level, "quiet|info")->capture_default_str();

    // --- ingest -------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "parse extractions into section fragments");
    std::string ingest_manifest, ingest_sections, ingest_out;
    ingest_cmd->add_option("--manifest", ingest_manifest)->required();
    ingest_cmd->add_option("--sections-dir", ingest_sections)->required();
    ingest_cmd->add_option("--out", ingest_out, "fragment output directory")->required();

    // --- extract ------------------------------------------------------------
    auto* extract_cmd =
        app.add_subcommand("extract", "prompt a model to extract sections into JSON");
    std::string ex_manifest, ex_sections, ex_client = "stub", ex_endpoint, ex_model = "stub",
                             ex_out;
    extract_cmd->add_option("--manifest", ex_manifest)->required();
    extract_cmd->add_option("--sections-dir", ex_sections, "directory of section .md files")
        ->required();
    extract_cmd->add_option("--client", ex_client, "stub|http")->capture_default_str();
    extract_cmd->add_option("--endpoint", ex_endpoint);
    extract_cmd->add_option("--model", ex_model);
    extract_cmd->add_option("--out", ex_out, "extraction output directory")->required();

    // --- merge ----------------------------------------------------------------
    auto* merge_cmd = app.add_subcommand("merge", "merge fragments or graphs");
    std::string merge_level, merge_in, merge_aliases, merge_extra, merge_out, merge_report;
    merge_cmd->add_option("--level", merge_level, "book|subject|union")->required();
    merge_cmd->add_option("--in", merge_in, "input directory or graph file")->required();
    merge_cmd->add_option("--aliases", merge_aliases);
    merge_cmd->add_option("--extra-edges", merge_extra);
    merge_cmd->add_option("--out", merge_out)->required();
    merge_cmd->add_option("--report", merge_report);

    // --- validate ----------------------------------------------------------------
    auto* validate_cmd = app.add_subcommand("validate", "detect cycles and certify a graph");
    std::string val_graph, val_resolutions, val_out, val_report;
    validate_cmd->add_option("--graph", val_graph)->required();
    validate_cmd->add_option("--resolutions", val_resolutions);
    validate_cmd->add_option("--out", val_out, "certified graph path")->required();
    validate_cmd->add_option("--report", val_report, "cycle report path");

    // --- benchgen ----------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("benchgen", "generate the multi-select benchmark");
    std::string bg_graph, bg_tasks = "all", bg_judge = "stub", bg_judge_endpoint,
                bg_similarity = "ngram", bg_sim_endpoint, bg_out, bg_report, bg_model = "stub";
    double bg_threshold = 0.85;
    bench_cmd->add_option("--graph", bg_graph)->required();
    bench_cmd->add_option("--tasks", bg_tasks, "all or comma-separated subtask list")
        ->capture_default_str();
    bench_cmd->add_option("--judge", bg_judge, "stub|http")->capture_default_str();
    bench_cmd->add_option("--judge-endpoint", bg_judge_endpoint);
    bench_cmd->add_option("--model", bg_model);
    bench_cmd->add_option("--similarity", bg_similarity, "ngram|http")->capture_default_str();
    bench_cmd->add_option("--similarity-endpoint", bg_sim_endpoint);
    bench_cmd->add_option("--surface-threshold", bg_threshold)->capture_default_str();
    bench_cmd->add_option("--out", bg_out)->required();
    bench_cmd->add_option("--report", bg_report);

    // --- synth -------------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "synthesize QA training records");
    std::string sy_graph, sy_paths = "node,edge,exercise", sy_client = "stub", sy_endpoint,
                sy_model = "stub", sy_targets, sy_out, sy_report;
    int sy_pairs = 1;
    synth_cmd->add_option("--graph", sy_graph)->required();
    synth_cmd->add_option("--paths", sy_paths)->capture_default_str();
    synth_cmd->add_option("--client", sy_client, "stub|http")->capture_default_str();
    synth_cmd->add_option("--endpoint", sy_endpoint);
    synth_cmd->add_option("--model", sy_model);
    synth_cmd->add_option("--targets", sy_targets, "JSON file or inline JSON object");
    synth_cmd->add_option("--pairs-per-prompt", sy_pairs)->capture_default_str();
    synth_cmd->add_option("--out", sy_out)->required();
    synth_cmd->add_option("--report", sy_report);

    // --- eval ---------------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "run a model over a benchmark and score it");
    std::string ev_bench, ev_client = "stub", ev_endpoint, ev_model = "stub", ev_out;
    int ev_concurrency = 8, ev_retries = 5;
    eval_cmd->add_option("--bench", ev_bench)->required();
    eval_cmd->add_option("--client", ev_client, "stub|http")->capture_default_str();
    eval_cmd->add_option("--endpoint", ev_endpoint);
    eval_cmd->add_option("--model", ev_model);
    eval_cmd->add_option("--concurrency", ev_concurrency)->capture_default_str();
    eval_cmd->add_option("--max-retries", ev_retries)->capture_default_str();
    eval_cmd->add_option("--out", ev_out, "output directory")->required();

    // --- stats ----------------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "composition statistics");
    auto* stats_graph_cmd = stats_cmd->add_subcommand("graph");
    std::string sg_graph;
    stats_graph_cmd->add_option("--graph", sg_graph)->required();
    auto* stats_bench_cmd = stats_cmd->add_subcommand("bench");
    std::string sb_bench;
    stats_bench_cmd->add_option("--bench", sb_bench)->required();

    // --- audit ---------------------------------------------------------------------
    auto* audit_cmd = app.add_subcommand("audit", "agreement, sampling, and overlap checks");
    auto* kappa_cmd = audit_cmd->add_subcommand("kappa");
    std::string ak_table;
    kappa_cmd->add_option("--table", ak_table, "CSV of annotator vote counts")->required();
    auto* sample_cmd = audit_cmd->add_subcommand("sample");
    std::string as_bench, as_out;
    double as_fraction = 0.15;
    sample_cmd->add_option("--bench", as_bench)->required();
    sample_cmd->add_option("--fraction", as_fraction)->capture_default_str();
    sample_cmd->add_option("--out", as_out, "sampled JSONL (default stdout)");
    auto* overlap_cmd = audit_cmd->add_subcommand("overlap");
    std::string ao_a, ao_b;
    size_t ao_n = 13;
    overlap_cmd->add_option("--a", ao_a)->required();
    overlap_cmd->add_option("--b", ao_b)->required();
    overlap_cmd->add_option("--n", ao_n)->capture_default_str();

    // --- fixture --------------------------------------------------------------------
    auto* fixture_cmd =
        app.add_subcommand("fixture", "write a seeded synthetic curriculum corpus");
    std::string fx_out;
    int fx_books = 3, fx_chapters = 6, fx_sections = 5, fx_concepts = 10;
    fixture_cmd->add_option("--out", fx_out)->required();
    fixture_cmd->add_option("--books", fx_books)->capture_default_str();
    fixture_cmd->add_option("--chapters", fx_chapters)->capture_default_str();
    fixture_cmd->add_option("--sections", fx_sections)->capture_default_str();
    fixture_cmd->add_option("--concepts", fx_concepts)->capture_default_str();

    // --- pipeline -------------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run every stage end to end");
    std::string pl_workdir;
    pipeline_cmd->add_option("--workdir", pl_workdir, "overrides the config workdir");

    CLI11_PARSE(app, argc, argv);
    g_log_level = log_level == "quiet" ? 0 : 1;

    if (*ingest_cmd) {
        auto manifest = unwrap(ingest::parse_manifest(load_json(ingest_manifest)));
        fs::create_directories(ingest_out);
        size_t n = 0;
        for (const auto& entry : manifest.entries) {
            auto extraction = unwrap(ingest::parse_section_extraction(
                load_json(fs::path(ingest_sections) / entry.file)));
            for (const auto& w : extraction.warnings) info(entry.file + ": " + w);
            auto fragment = unwrap(ingest::build_section_graph(manifest.book, entry, extraction));
            fs::path out = fs::path(ingest_out) /
                           (fs::path(entry.file).stem().string() + ".graph.json");
            unwrap(graph::save_graph(fragment, out));
            ++n;
        }
        info("wrote " + std::to_string(n) + " fragments to " + ingest_out);
        return 0;
    }

    if (*extract_cmd) {
        auto manifest = unwrap(ingest::parse_manifest(load_json(ex_manifest)));
        auto client = make_client(ex_client, ex_endpoint, ex_model, seed,
                                  model::extraction_stub_responder());
        fs::create_directories(ex_out);
        for (const auto& entry : manifest.entries) {
            fs::path md = fs::path(ex_sections) / (fs::path(entry.file).stem().string() + ".md");
            auto text = unwrap(jsonl::read_text_file(md));
            auto prompt = unwrap(ingest::render_extraction_prompt(text));
            model::ChatRequest req;
            req.messages = {{"user", prompt}};
            req.params.max_tokens = 4096;
            auto reply = unwrap(client->send(req));
            auto doc = unwrap(ingest::parse_model_extraction(reply));
            auto extraction = unwrap(ingest::parse_section_extraction(doc));
            unwrap(jsonl::write_text_file(fs::path(ex_out) / entry.file,
                                          extraction_to_json(extraction).dump(2) + "\n"));
        }
        info("extracted " + std::to_string(manifest.entries.size()) + " sections");
        return 0;
    }

    if (*merge_cmd) {
        std::vector<graph::KnowledgeGraph> graphs;
        for (const auto& path : graphs_in(merge_in)) {
            graphs.push_back(unwrap(graph::load_graph_building(path)));
        }
        merge::MergeResult result{graph::KnowledgeGraph{}, merge::MergeReport{}};
        if (merge_level == "book") {
            result = unwrap(merge::merge_book(graphs));
        } else if (merge_level == "subject") {
            std::vector<merge::AliasEntry> aliases;
            if (!merge_aliases.empty()) {
                aliases = unwrap(merge::parse_alias_file(load_json(merge_aliases)));
            }
            result = unwrap(merge::merge_subject(graphs, aliases));
        } else if (merge_level == "union") {
            std::vector<graph::Edge> extra;
            if (!merge_extra.empty()) {
                for (const auto& e : load_json(merge_extra)) {
                    auto kind = graph::edge_kind_from(e.value("kind", std::string{}));
                    if (!kind) die(make_error(Errc::malformed_document, "bad extra edge kind"));
                    extra.push_back({*kind, e.value("source", std::string{}),
                                     e.value("target", std::string{}),
                                     e.value("evidence", std::string{})});
                }
            }
            result = unwrap(merge::merge_union(graphs, extra));
        } else {
            die(make_error(Errc::config_error, "unknown merge level '" + merge_level + "'"));
        }
        unwrap(graph::save_graph(result.graph, merge_out));
        if (!merge_report.empty()) {
            unwrap(jsonl::write_text_file(merge_report, result.report.to_json().dump(2) + "\n"));
        }
        info("merged " + std::to_string(result.report.nodes_in) + " -> " +
             std::to_string(result.report.nodes_out) + " nodes");
        return 0;
    }

    if (*validate_cmd) {
        auto g = unwrap(graph::load_graph_building(val_graph));
        std::vector<validate::Resolution> resolutions;
        if (!val_resolutions.empty()) {
            resolutions = unwrap(validate::parse_resolutions(load_json(val_resolutions)));
        }
        auto applied = unwrap(validate::apply_resolutions(std::move(g), resolutions));
        if (!val_report.empty()) {
            nlohmann::json residual = nlohmann::json::array();
            for (const auto& report : applied.residual) residual.push_back(report.to_json());
            unwrap(jsonl::write_text_file(val_report, residual.dump(2) + "\n"));
        }
        auto outcome = validate::certify(std::move(applied.graph));
        if (!outcome.certified) {
            fprintf(stderr, "certification failed with %zu violations:\n",
                    outcome.violations.size());
            for (size_t i = 0; i < outcome.violations.size() && i < 20; ++i) {
                fprintf(stderr, "  %s\n", outcome.violations[i].c_str());
            }
            return 2;
        }
        unwrap(graph::save_graph(outcome.graph, val_out));
        info("certified graph written to " + val_out);
        return 0;
    }

    if (*bench_cmd) {
        auto g = unwrap(graph::load_graph(bg_graph, graph::FreezeMode::require_assembly));
        std::unique_ptr<bench::SimilarityProvider> similarity;
        if (bg_similarity == "http") {
            similarity = std::make_unique<bench::FallbackSimilarity>(
                std::make_unique<bench::HttpSimilarity>(bg_sim_endpoint));
        } else {
            similarity = std::make_unique<bench::NgramSimilarity>();
        }
        auto judge = make_client(bg_judge, bg_judge_endpoint, bg_model, seed,
                                 model::judge_stub_responder());
        bench::GenConfig gen_config;
        gen_config.seed = seed;
        gen_config.surface_threshold = bg_threshold;
        if (bg_tasks != "all") gen_config.subtasks = split_csv(bg_tasks);
        bench::Generator generator(g, *similarity, *judge, gen_config);
        auto result = unwrap(generator.generate());
        std::vector<nlohmann::json> lines;
        for (const auto& item : result.items) lines.push_back(item.to_json());
        unwrap(jsonl::write_file(bg_out, lines));
        if (!bg_report.empty()) {
            unwrap(jsonl::write_text_file(bg_report, result.report.to_json().dump(2) + "\n"));
        }
        size_t dropped = 0;
        for (const auto& [reason, count] : result.report.drops) dropped += count;
        info("emitted " + std::to_string(result.items.size()) + " items, dropped " +
             std::to_string(dropped));
        return 0;
    }

    if (*synth_cmd) {
        auto g = unwrap(graph::load_graph(sy_graph, graph::FreezeMode::require_assembly));
        auto client =
            make_client(sy_client, sy_endpoint, sy_model, seed, model::qa_stub_responder());
        synth::SynthConfig synth_config;
        synth_config.seed = seed;
        synth_config.pairs_per_prompt = sy_pairs;
        synth_config.paths = split_csv(sy_paths);
        if (!sy_targets.empty()) {
            nlohmann::json targets = fs::exists(sy_targets)
                                         ? load_json(sy_targets)
                                         : nlohmann::json::parse(sy_targets, nullptr, false);
            if (targets.is_discarded() || !targets.is_object()) {
                die(make_error(Errc::config_error, "--targets must be a JSON object"));
            }
            for (auto it = targets.begin(); it != targets.end(); ++it) {
                synth_config.targets[it.key()] = it.value().get<size_t>();
            }
        }
        auto result = unwrap(synth::synthesize(g, *client, synth_config));
        for (const auto& w : result.report.warnings) info(w);
        std::vector<nlohmann::json> lines;
        for (const auto& pair : result.pairs) lines.push_back(pair.to_json());
        unwrap(jsonl::write_file(sy_out, lines));
        if (!sy_report.empty()) {
            unwrap(jsonl::write_text_file(sy_report, result.report.to_json().dump(2) + "\n"));
        }
        info("wrote " + std::to_string(result.pairs.size()) + " QA records");
        return 0;
    }

    if (*eval_cmd) {
        std::vector<bench::BenchItem> items;
        for (const auto& line : unwrap(jsonl::read_file(ev_bench))) {
            items.push_back(unwrap(bench::BenchItem::from_json(line)));
        }
        auto client =
            make_client(ev_client, ev_endpoint, ev_model, seed, model::answer_stub_responder());
        eval::EvalConfig eval_config;
        eval_config.concurrency = ev_concurrency;
        eval_config.max_retries = ev_retries;
        auto records = unwrap(eval::run_eval(items, *client, eval_config));
        auto report = eval::build_report(records);

        fs::create_directories(ev_out);
        std::vector<nlohmann::json> lines;
        for (const auto& r : records) lines.push_back(r.to_json());
        unwrap(jsonl::write_file(fs::path(ev_out) / "records.jsonl", lines));
        unwrap(jsonl::write_text_file(fs::path(ev_out) / "report.json",
                                      report.to_json().dump(2) + "\n"));
        unwrap(jsonl::write_text_file(fs::path(ev_out) / "report.md", report.to_markdown()));
        printf("%s", report.to_markdown().c_str());
        return 0;
    }

    if (*stats_graph_cmd) {
        auto g = unwrap(graph::load_graph(sg_graph, graph::FreezeMode::partial));
        auto s = stats::graph_stats(g);
        printf("%s", s.to_text().c_str());
        printf("%s\n", s.to_json().dump(2).c_str());
        return 0;
    }
    if (*stats_bench_cmd) {
        auto s = unwrap(stats::bench_stats(unwrap(jsonl::read_file(sb_bench))));
        printf("%s", s.to_text().c_str());
        printf("%s\n", s.to_json().dump(2).c_str());
        return 0;
    }

    if (*kappa_cmd) {
        auto table = unwrap(audit::parse_agreement_csv(unwrap(jsonl::read_text_file(ak_table))));
        printf("fleiss_kappa=%.6f\n", unwrap(audit::fleiss_kappa(table)));
        return 0;
    }
    if (*sample_cmd) {
        auto lines = unwrap(jsonl::read_file(as_bench));
        std::vector<audit::SampleItem> units;
        std::map<std::string, nlohmann::json> by_id;
        for (const auto& line : lines) {
            auto item = unwrap(bench::BenchItem::from_json(line));
            std::string stratum = item.family + "|" + item.subject + "|" + item.stage;
            units.push_back({item.item_id, stratum});
            by_id[item.item_id] = line;
        }
        auto sampled = unwrap(audit::stratified_sample(units, as_fraction, seed));
        std::vector<nlohmann::json> out;
        for (const auto& s : sampled) out.push_back(by_id.at(s.id));
        if (as_out.empty()) {
            for (const auto& line : out) printf("%s\n", line.dump().c_str());
        } else {
            unwrap(jsonl::write_file(as_out, out));
        }
        info("sampled " + std::to_string(out.size()) + " of " + std::to_string(lines.size()));
        return 0;
    }
    if (*overlap_cmd) {
        auto docs_of = [&](const std::string& path) {
            std::vector<std::string> docs;
            for (const auto& line : unwrap(jsonl::read_file(path))) {
                docs.push_back(record_text(line));
            }
            return docs;
        };
        auto stats = audit::ngram_overlap(docs_of(ao_a), docs_of(ao_b), ao_n);
        printf("%s\n", stats.to_json().dump(2).c_str());
        return 0;
    }

    if (*fixture_cmd) {
        fixture::FixtureConfig config;
        config.seed = seed;
        config.books_per_subject = fx_books;
        config.chapters_per_book = fx_chapters;
        config.sections_per_chapter = fx_sections;
        config.concepts_per_section = fx_concepts;
        auto paths = unwrap(fixture::write_corpus(config, fx_out));
        // a ready-to-run pipeline config next to the corpus; paths inside the
        // config are resolved relative to the config file itself
        pipeline::PipelineConfig pl;
        pl.seed = seed;
        pl.workdir = "out";
        for (const auto& m : paths.manifests) {
            pl.manifests.push_back(fs::relative(m, fx_out));
        }
        pl.extra_edges = fs::relative(paths.extra_edges, fx_out);
        unwrap(jsonl::write_text_file(fs::path(fx_out) / "pipeline.json",
                                      pl.to_json().dump(2) + "\n"));
        info("corpus with " + std::to_string(paths.manifests.size()) + " books at " + fx_out);
        return 0;
    }

    if (*pipeline_cmd) {
        if (config_path.empty()) {
            die(make_error(Errc::config_error, "pipeline needs --config"));
        }
        auto doc = load_json(config_path);
        auto config =
            unwrap(pipeline::PipelineConfig::from_json(doc, fs::path(config_path).parent_path()));
        if (app.count("--seed")) config.seed = seed;
        if (!pl_workdir.empty()) config.workdir = pl_workdir;
        auto outcome = unwrap(pipeline::run_pipeline(config));
        for (const auto& stage : outcome.stages) {
            info(stage.name + (stage.skipped ? " [skipped]" : " [ran]"));
        }
        printf("bench: %s\ntrain: %s\ncertified graph: %s\nrun manifest: %s\n",
               outcome.bench_jsonl.string().c_str(), outcome.train_jsonl.string().c_str(),
               outcome.certified_graph.string().c_str(), outcome.run_manifest.string().c_str());
        return 0;
    }

    return 0;
}
