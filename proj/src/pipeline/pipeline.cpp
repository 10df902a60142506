#include "kgforge/pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "kgforge/bench/generator.hpp"
#include "kgforge/core/hash.hpp"
#include "kgforge/core/jsonl.hpp"
#include "kgforge/graph/serialize.hpp"
#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/manifest.hpp"
#include "kgforge/ingest/section_graph.hpp"
#include "kgforge/merge/merge.hpp"
#include "kgforge/stats/stats.hpp"
#include "kgforge/synth/qa.hpp"
#include "kgforge/validate/validator.hpp"

namespace kgforge::pipeline {

namespace fs = std::filesystem;
using graph::KnowledgeGraph;

Result<PipelineConfig> PipelineConfig::from_json(const nlohmann::json& doc,
                                                 const fs::path& base_dir) {
    if (!doc.is_object()) return Error{Errc::config_error, "config must be a JSON object"};
    if (doc.value("version", kConfigVersion) != kConfigVersion) {
        return Error{Errc::config_error, "unsupported config version"};
    }
    PipelineConfig c;
    auto resolve = [&](const std::string& p) -> fs::path {
        fs::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };
    c.seed = doc.value("seed", uint64_t{0});
    c.workdir = resolve(doc.value("workdir", std::string{"out"}));
    if (doc.contains("manifests")) {
        for (const auto& m : doc["manifests"]) c.manifests.push_back(resolve(m));
    }
    if (doc.contains("extra_edges")) c.extra_edges = resolve(doc["extra_edges"]);
    if (doc.contains("aliases")) c.aliases = resolve(doc["aliases"]);
    if (doc.contains("resolutions")) c.resolutions = resolve(doc["resolutions"]);
    c.judge = doc.value("judge", c.judge);
    c.judge_endpoint = doc.value("judge_endpoint", c.judge_endpoint);
    c.similarity = doc.value("similarity", c.similarity);
    c.similarity_endpoint = doc.value("similarity_endpoint", c.similarity_endpoint);
    if (doc.contains("tasks")) {
        for (const auto& t : doc["tasks"]) c.tasks.push_back(t.get<std::string>());
    }
    c.client = doc.value("client", c.client);
    c.client_endpoint = doc.value("client_endpoint", c.client_endpoint);
    c.model = doc.value("model", c.model);
    if (doc.contains("paths")) {
        c.paths.clear();
        for (const auto& p : doc["paths"]) c.paths.push_back(p.get<std::string>());
    }
    if (doc.contains("targets")) {
        for (auto it = doc["targets"].begin(); it != doc["targets"].end(); ++it) {
            c.targets[it.key()] = it.value().get<size_t>();
        }
    }
    c.pairs_per_prompt = doc.value("pairs_per_prompt", c.pairs_per_prompt);
    c.surface_threshold = doc.value("surface_threshold", c.surface_threshold);
    if (c.manifests.empty()) {
        return Error{Errc::config_error, "config lists no book manifests"};
    }
    return c;
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json doc;
    doc["version"] = kConfigVersion;
    doc["seed"] = seed;
    doc["workdir"] = workdir.string();
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : manifests) ms.push_back(m.string());
    doc["manifests"] = std::move(ms);
    if (!extra_edges.empty()) doc["extra_edges"] = extra_edges.string();
    if (!aliases.empty()) doc["aliases"] = aliases.string();
    if (!resolutions.empty()) doc["resolutions"] = resolutions.string();
    doc["judge"] = judge;
    doc["similarity"] = similarity;
    doc["client"] = client;
    doc["model"] = model;
    doc["paths"] = paths;
    doc["targets"] = targets;
    doc["pairs_per_prompt"] = pairs_per_prompt;
    doc["surface_threshold"] = surface_threshold;
    if (!tasks.empty()) doc["tasks"] = tasks;
    return doc;
}

namespace {

std::string hex64(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Result<std::string> file_hash(const fs::path& path) {
    auto text = jsonl::read_text_file(path);
    if (!text.ok()) return text.error();
    return hex64(fnv1a64(text.value()));
}

// Tracks stage execution and skippability against the previous run manifest.
class StageLedger {
public:
    StageLedger(fs::path workdir, uint64_t master_seed)
        : workdir_(std::move(workdir)), master_seed_(master_seed) {
        auto prev = jsonl::read_text_file(workdir_ / "run_manifest.json");
        if (prev.ok()) {
            previous_ = nlohmann::json::parse(prev.value(), nullptr, false);
            if (previous_.is_discarded()) previous_ = nlohmann::json::object();
        } else {
            previous_ = nlohmann::json::object();
        }
    }

    uint64_t stage_seed(const std::string& stage) const {
        return hash_combine(master_seed_, fnv1a64(stage));
    }

    // input hash = stage seed + parameter string + every input file's bytes
    Result<std::string> input_hash(const std::string& stage, const std::string& params,
                                   const std::vector<fs::path>& inputs) const {
        uint64_t h = fnv1a64(params, stage_seed(stage));
        for (const auto& path : inputs) {
            auto text = jsonl::read_text_file(path);
            if (!text.ok()) return text.error();
            h = fnv1a64(text.value(), h);
        }
        return hex64(h);
    }

    bool can_skip(const std::string& stage, const std::string& input_hash) const {
        auto it = previous_.find(stage);
        if (it == previous_.end() || !it->is_object()) return false;
        if (it->value("input_hash", std::string{}) != input_hash) return false;
        if (!it->contains("outputs")) return false;
        for (auto out = (*it)["outputs"].begin(); out != (*it)["outputs"].end(); ++out) {
            auto h = file_hash(out.key());
            if (!h.ok() || h.value() != out.value().get<std::string>()) return false;
        }
        return true;
    }

    Result<StageRecord> record(const std::string& stage, const std::string& input_hash,
                               bool skipped, const std::vector<fs::path>& outputs) {
        StageRecord rec;
        rec.name = stage;
        rec.skipped = skipped;
        rec.input_hash = input_hash;
        for (const auto& path : outputs) {
            auto h = file_hash(path);
            if (!h.ok()) return h.error();
            rec.outputs[path.string()] = h.value();
        }
        nlohmann::json entry;
        entry["input_hash"] = rec.input_hash;
        entry["outputs"] = rec.outputs;
        current_[stage] = std::move(entry);
        records_.push_back(rec);
        return rec;
    }

    Status flush() {
        return jsonl::write_text_file(workdir_ / "run_manifest.json", current_.dump(2) + "\n");
    }

    const std::vector<StageRecord>& records() const { return records_; }

private:
    fs::path workdir_;
    uint64_t master_seed_;
    nlohmann::json previous_;
    nlohmann::json current_ = nlohmann::json::object();
    std::vector<StageRecord> records_;
};

Result<std::vector<graph::Edge>> load_extra_edges(const fs::path& path) {
    std::vector<graph::Edge> edges;
    if (path.empty()) return edges;
    auto text = jsonl::read_text_file(path);
    if (!text.ok()) return text.error();
    nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        return Error{Errc::malformed_document, path.string() + " is not a JSON array"};
    }
    for (const auto& e : doc) {
        auto kind = graph::edge_kind_from(e.value("kind", std::string{}));
        if (!kind) return Error{Errc::malformed_document, "extra edge with unknown kind"};
        edges.push_back({*kind, e.value("source", std::string{}),
                         e.value("target", std::string{}), e.value("evidence", std::string{})});
    }
    return edges;
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (c == '/' || c == '\\' || c == ' ') c = '_';
    }
    return out;
}

} // namespace

Result<PipelineOutcome> run_pipeline(const PipelineConfig& config) {
    std::error_code ec;
    fs::create_directories(config.workdir, ec);
    StageLedger ledger(config.workdir, config.seed);
    PipelineOutcome outcome;

    // --- per-book: ingest + book merge ------------------------------------
    struct BookOut {
        std::string subject;
        fs::path graph_path;
    };
    std::vector<BookOut> book_graphs;

    for (const fs::path& manifest_path : config.manifests) {
        auto manifest_text = jsonl::read_text_file(manifest_path);
        if (!manifest_text.ok()) return manifest_text.error();
        nlohmann::json manifest_doc =
            nlohmann::json::parse(manifest_text.value(), nullptr, false);
        if (manifest_doc.is_discarded()) {
            return Error{Errc::malformed_document, manifest_path.string()};
        }
        auto manifest = ingest::parse_manifest(manifest_doc);
        if (!manifest.ok()) return manifest.error();
        const auto& m = manifest.value();

        std::string stage = "book:" + m.book.id;
        fs::path out_path = config.workdir / "books" / (sanitize(m.book.id) + ".graph.json");
        fs::path report_path =
            config.workdir / "books" / (sanitize(m.book.id) + ".merge_report.json");

        std::vector<fs::path> inputs{manifest_path};
        fs::path sections_dir = manifest_path.parent_path() / "sections";
        for (const auto& entry : m.entries) inputs.push_back(sections_dir / entry.file);
        auto ihash = ledger.input_hash(stage, "v1", inputs);
        if (!ihash.ok()) return ihash.error();

        if (ledger.can_skip(stage, ihash.value())) {
            auto rec = ledger.record(stage, ihash.value(), true, {out_path, report_path});
            if (!rec.ok()) return rec.error();
        } else {
            std::vector<KnowledgeGraph> fragments;
            for (const auto& entry : m.entries) {
                auto text = jsonl::read_text_file(sections_dir / entry.file);
                if (!text.ok()) return text.error();
                nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
                if (doc.is_discarded()) {
                    return Error{Errc::malformed_document,
                                 (sections_dir / entry.file).string()};
                }
                auto extraction = ingest::parse_section_extraction(doc);
                if (!extraction.ok()) return extraction.error();
                auto fragment =
                    ingest::build_section_graph(m.book, entry, extraction.value());
                if (!fragment.ok()) return fragment.error();
                fragments.push_back(std::move(fragment).value());
            }
            auto merged = merge::merge_book(fragments);
            if (!merged.ok()) return merged.error();
            if (auto st = graph::save_graph(merged.value().graph, out_path); !st.ok()) {
                return st.error();
            }
            if (auto st = jsonl::write_text_file(report_path,
                                                 merged.value().report.to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record(stage, ihash.value(), false, {out_path, report_path});
            if (!rec.ok()) return rec.error();
        }
        book_graphs.push_back({m.book.subject, out_path});
    }

    // --- per-subject merge --------------------------------------------------
    std::map<std::string, std::vector<fs::path>> by_subject;
    for (const auto& b : book_graphs) by_subject[b.subject].push_back(b.graph_path);

    std::vector<merge::AliasEntry> aliases;
    if (!config.aliases.empty()) {
        auto text = jsonl::read_text_file(config.aliases);
        if (!text.ok()) return text.error();
        nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
        if (doc.is_discarded()) return Error{Errc::malformed_document, config.aliases.string()};
        auto parsed = merge::parse_alias_file(doc);
        if (!parsed.ok()) return parsed.error();
        aliases = std::move(parsed).value();
    }

    std::vector<fs::path> subject_paths;
    for (const auto& [subject, paths] : by_subject) {
        std::string stage = "subject:" + subject;
        fs::path out_path = config.workdir / "subjects" / (sanitize(subject) + ".graph.json");
        fs::path report_path =
            config.workdir / "subjects" / (sanitize(subject) + ".merge_report.json");
        std::vector<fs::path> inputs = paths;
        if (!config.aliases.empty()) inputs.push_back(config.aliases);
        auto ihash = ledger.input_hash(stage, "v1", inputs);
        if (!ihash.ok()) return ihash.error();

        if (ledger.can_skip(stage, ihash.value())) {
            auto rec = ledger.record(stage, ihash.value(), true, {out_path, report_path});
            if (!rec.ok()) return rec.error();
        } else {
            std::vector<KnowledgeGraph> graphs;
            for (const auto& p : paths) {
                auto g = graph::load_graph_building(p);
                if (!g.ok()) return g.error();
                graphs.push_back(std::move(g).value());
            }
            auto merged = merge::merge_subject(graphs, aliases);
            if (!merged.ok()) return merged.error();
            if (auto st = graph::save_graph(merged.value().graph, out_path); !st.ok()) {
                return st.error();
            }
            if (auto st = jsonl::write_text_file(report_path,
                                                 merged.value().report.to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record(stage, ihash.value(), false, {out_path, report_path});
            if (!rec.ok()) return rec.error();
        }
        subject_paths.push_back(out_path);
    }

    // --- union + validation ---------------------------------------------------
    fs::path merged_path = config.workdir / "merged.graph.json";
    {
        std::vector<fs::path> inputs = subject_paths;
        if (!config.extra_edges.empty()) inputs.push_back(config.extra_edges);
        auto ihash = ledger.input_hash("union", "v1", inputs);
        if (!ihash.ok()) return ihash.error();
        if (ledger.can_skip("union", ihash.value())) {
            auto rec = ledger.record("union", ihash.value(), true, {merged_path});
            if (!rec.ok()) return rec.error();
        } else {
            std::vector<KnowledgeGraph> graphs;
            for (const auto& p : subject_paths) {
                auto g = graph::load_graph_building(p);
                if (!g.ok()) return g.error();
                graphs.push_back(std::move(g).value());
            }
            auto extra = load_extra_edges(config.extra_edges);
            if (!extra.ok()) return extra.error();
            auto combined = merge::merge_union(graphs, extra.value());
            if (!combined.ok()) return combined.error();
            if (auto st = graph::save_graph(combined.value().graph, merged_path); !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record("union", ihash.value(), false, {merged_path});
            if (!rec.ok()) return rec.error();
        }
    }

    fs::path certified_path = config.workdir / "certified.graph.json";
    fs::path cycles_path = config.workdir / "cycles.json";
    {
        std::vector<fs::path> inputs{merged_path};
        if (!config.resolutions.empty()) inputs.push_back(config.resolutions);
        auto ihash = ledger.input_hash("validate", "v1", inputs);
        if (!ihash.ok()) return ihash.error();
        if (ledger.can_skip("validate", ihash.value())) {
            auto rec = ledger.record("validate", ihash.value(), true,
                                     {certified_path, cycles_path});
            if (!rec.ok()) return rec.error();
        } else {
            auto g = graph::load_graph_building(merged_path);
            if (!g.ok()) return g.error();

            std::vector<validate::Resolution> resolutions;
            if (!config.resolutions.empty()) {
                auto text = jsonl::read_text_file(config.resolutions);
                if (!text.ok()) return text.error();
                nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
                if (doc.is_discarded()) {
                    return Error{Errc::malformed_document, config.resolutions.string()};
                }
                auto parsed = validate::parse_resolutions(doc);
                if (!parsed.ok()) return parsed.error();
                resolutions = std::move(parsed).value();
            }
            auto applied = validate::apply_resolutions(std::move(g).value(), resolutions);
            if (!applied.ok()) return applied.error();

            nlohmann::json residual = nlohmann::json::array();
            for (const auto& report : applied.value().residual) {
                residual.push_back(report.to_json());
            }
            if (auto st = jsonl::write_text_file(cycles_path, residual.dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }

            auto outcome_cert = validate::certify(std::move(applied.value().graph));
            if (!outcome_cert.certified) {
                std::string what = "certification failed:";
                for (size_t i = 0; i < outcome_cert.violations.size() && i < 10; ++i) {
                    what += "\n  " + outcome_cert.violations[i];
                }
                return Error{Errc::certification_failed, what};
            }
            if (auto st = graph::save_graph(outcome_cert.graph, certified_path); !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record("validate", ihash.value(), false,
                                     {certified_path, cycles_path});
            if (!rec.ok()) return rec.error();
        }
    }

    // --- benchmark generation ---------------------------------------------------
    fs::path bench_path = config.workdir / "bench.jsonl";
    fs::path bench_report_path = config.workdir / "bench_report.json";
    {
        std::string params = "v1|judge=" + config.judge + "|sim=" + config.similarity +
                             "|threshold=" + std::to_string(config.surface_threshold);
        for (const auto& t : config.tasks) params += "|task=" + t;
        auto ihash = ledger.input_hash("benchgen", params, {certified_path});
        if (!ihash.ok()) return ihash.error();
        if (ledger.can_skip("benchgen", ihash.value())) {
            auto rec = ledger.record("benchgen", ihash.value(), true,
                                     {bench_path, bench_report_path});
            if (!rec.ok()) return rec.error();
        } else {
            auto g = graph::load_graph(certified_path, graph::FreezeMode::require_assembly);
            if (!g.ok()) return g.error();

            std::unique_ptr<bench::SimilarityProvider> similarity;
            if (config.similarity == "http") {
                similarity = std::make_unique<bench::FallbackSimilarity>(
                    std::make_unique<bench::HttpSimilarity>(config.similarity_endpoint));
            } else {
                similarity = std::make_unique<bench::NgramSimilarity>();
            }
            std::unique_ptr<model::ModelClient> judge;
            uint64_t stage_seed = ledger.stage_seed("benchgen");
            if (config.judge == "http") {
                judge = std::make_unique<model::HttpModelClient>(config.judge_endpoint,
                                                                 config.model);
            } else {
                judge = std::make_unique<model::StubModelClient>(stage_seed,
                                                                 model::judge_stub_responder());
            }
            bench::GenConfig gen_config;
            gen_config.seed = stage_seed;
            gen_config.surface_threshold = config.surface_threshold;
            gen_config.subtasks = config.tasks;
            bench::Generator generator(g.value(), *similarity, *judge, gen_config);
            auto result = generator.generate();
            if (!result.ok()) return result.error();

            std::vector<nlohmann::json> lines;
            lines.reserve(result.value().items.size());
            for (const auto& item : result.value().items) lines.push_back(item.to_json());
            if (auto st = jsonl::write_file(bench_path, lines); !st.ok()) return st.error();
            if (auto st = jsonl::write_text_file(
                    bench_report_path, result.value().report.to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record("benchgen", ihash.value(), false,
                                     {bench_path, bench_report_path});
            if (!rec.ok()) return rec.error();
        }
    }

    // --- QA synthesis ---------------------------------------------------------
    fs::path train_path = config.workdir / "train.jsonl";
    fs::path synth_report_path = config.workdir / "synth_report.json";
    {
        std::string params = "v1|client=" + config.client + "|n=" +
                             std::to_string(config.pairs_per_prompt);
        for (const auto& p : config.paths) params += "|path=" + p;
        for (const auto& [k, v] : config.targets) {
            params += "|" + k + "=" + std::to_string(v);
        }
        auto ihash = ledger.input_hash("synth", params, {certified_path});
        if (!ihash.ok()) return ihash.error();
        if (ledger.can_skip("synth", ihash.value())) {
            auto rec = ledger.record("synth", ihash.value(), true,
                                     {train_path, synth_report_path});
            if (!rec.ok()) return rec.error();
        } else {
            auto g = graph::load_graph(certified_path, graph::FreezeMode::require_assembly);
            if (!g.ok()) return g.error();

            uint64_t stage_seed = ledger.stage_seed("synth");
            std::unique_ptr<model::ModelClient> client;
            if (config.client == "http") {
                client = std::make_unique<model::HttpModelClient>(config.client_endpoint,
                                                                  config.model);
            } else {
                client = std::make_unique<model::StubModelClient>(stage_seed,
                                                                  model::qa_stub_responder());
            }
            synth::SynthConfig synth_config;
            synth_config.seed = stage_seed;
            synth_config.pairs_per_prompt = config.pairs_per_prompt;
            synth_config.paths = config.paths;
            synth_config.targets = config.targets;
            auto result = synth::synthesize(g.value(), *client, synth_config);
            if (!result.ok()) return result.error();

            std::vector<nlohmann::json> lines;
            lines.reserve(result.value().pairs.size());
            for (const auto& pair : result.value().pairs) lines.push_back(pair.to_json());
            if (auto st = jsonl::write_file(train_path, lines); !st.ok()) return st.error();
            if (auto st = jsonl::write_text_file(
                    synth_report_path, result.value().report.to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record("synth", ihash.value(), false,
                                     {train_path, synth_report_path});
            if (!rec.ok()) return rec.error();
        }
    }

    // --- stats -----------------------------------------------------------------
    fs::path graph_stats_path = config.workdir / "graph_stats.json";
    fs::path bench_stats_path = config.workdir / "bench_stats.json";
    {
        auto ihash = ledger.input_hash("stats", "v1", {certified_path, bench_path});
        if (!ihash.ok()) return ihash.error();
        if (ledger.can_skip("stats", ihash.value())) {
            auto rec = ledger.record("stats", ihash.value(), true,
                                     {graph_stats_path, bench_stats_path});
            if (!rec.ok()) return rec.error();
        } else {
            auto g = graph::load_graph(certified_path, graph::FreezeMode::require_assembly);
            if (!g.ok()) return g.error();
            auto gs = stats::graph_stats(g.value());
            if (auto st = jsonl::write_text_file(graph_stats_path, gs.to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto lines = jsonl::read_file(bench_path);
            if (!lines.ok()) return lines.error();
            auto bs = stats::bench_stats(lines.value());
            if (!bs.ok()) return bs.error();
            if (auto st = jsonl::write_text_file(bench_stats_path,
                                                 bs.value().to_json().dump(2) + "\n");
                !st.ok()) {
                return st.error();
            }
            auto rec = ledger.record("stats", ihash.value(), false,
                                     {graph_stats_path, bench_stats_path});
            if (!rec.ok()) return rec.error();
        }
    }

    if (auto st = ledger.flush(); !st.ok()) return st.error();
    outcome.stages = ledger.records();
    outcome.certified_graph = certified_path;
    outcome.bench_jsonl = bench_path;
    outcome.train_jsonl = train_path;
    outcome.run_manifest = config.workdir / "run_manifest.json";
    return outcome;
}

} // namespace kgforge::pipeline
