#include "kgforge/fixture/synthetic.hpp"

#include <cstdio>
#include <map>
#include <set>

#include "kgforge/core/hash.hpp"
#include "kgforge/core/jsonl.hpp"
#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/section_graph.hpp"
#include "kgforge/merge/merge.hpp"
#include "kgforge/validate/validator.hpp"

namespace kgforge::fixture {

using graph::Edge;
using graph::EdgeKind;
using graph::KnowledgeGraph;
using graph::NodeKind;
using ingest::BookInfo;
using ingest::LocalEdge;
using ingest::LocalNode;
using ingest::SectionExtraction;
using ingest::SectionManifestEntry;

namespace {

std::string pad(int v, int width) {
    char buf[24];
    snprintf(buf, sizeof(buf), "%0*d", width, v);
    return buf;
}

struct SectionContent {
    SectionManifestEntry entry;
    SectionExtraction extraction;
};

struct BookContent {
    BookInfo book;
    std::vector<SectionContent> sections;
};

struct Corpus {
    std::vector<BookContent> books;
    std::vector<Edge> extra_edges;
};

// Lexically diverse synthetic names; near-duplicate surface filtering would
// otherwise collapse counter-style names that share long prefixes.
const char* kWordPool[] = {
    "gradient",  "torque",    "membrane",  "isotope",   "vector",    "lattice",
    "catalyst",  "momentum",  "entropy",   "polymer",   "tangent",   "buoyancy",
    "solvent",   "friction",  "habitat",   "enzyme",    "orbit",     "prism",
    "velocity",  "diffusion", "pendulum",  "mitosis",   "valence",   "quotient",
    "spectrum",  "density",   "genome",    "symmetry",  "pressure",  "isomer",
    "capacitor", "nucleus",   "ratio",     "stamen",    "inertia",   "meiosis",
    "radical",   "integral",  "osmosis",   "refraction","chlorophyll","fraction",
    "impulse",   "titration", "parabola",  "plasmid",   "resonance", "monomer",
    "derivative","viscosity", "allele",    "magnetism", "oxidation", "vertex",
    "kinetics",  "phenotype", "modulus",   "filament",  "polygon",   "neutron",
    "synthesis", "amplitude", "chromosome","cosine",    "dilution",  "leverage",
    "sediment",  "tension",   "variance",  "catalysis", "ribosome",  "induction",
    "molarity",  "trapezoid", "vacuole",   "frequency", "halogen",   "median",
    "nucleotide","potential", "stoichiometry", "asymptote", "conduction", "epidermis",
    "isotherm",  "logarithm", "mutation",  "ohm",       "photon",    "quadratic",
    "receptor",  "sublimation","thermocline","uniformity","wavelength","zygote",
};
constexpr size_t kWordPoolSize = sizeof(kWordPool) / sizeof(kWordPool[0]);

const char* kStemTemplates[] = {
    "Compute the %s of a sample in which the %s doubles.",
    "Explain how %s changes while %s is held constant.",
    "A student measures %s in the lab; determine the resulting %s.",
    "Given the %s of the system, find its %s after two steps.",
    "Sketch the relationship between %s and %s over time.",
    "Why does %s depend on %s? Give one reason from the text.",
};
constexpr size_t kStemTemplateCount = sizeof(kStemTemplates) / sizeof(kStemTemplates[0]);

// per-subject name registry; rank is the creation index across kinds, which
// gives prerequisite/taxonomic edges a global acyclic orientation
struct NameRegistry {
    std::vector<std::pair<std::string, int>> concepts; // (name, rank)
    std::vector<std::pair<std::string, int>> skills;
    std::set<std::string> used;
    int next_rank = 0;
    int name_counter = 0;
};

const char* stage_for_book(int book_index) {
    switch (book_index % 3) {
        case 1: return "primary";
        case 2: return "middle";
        default: return "high";
    }
}

Corpus generate(const FixtureConfig& config) {
    Rng rng(hash_combine(config.seed, fnv1a64("fixture")));
    Corpus corpus;
    std::map<std::string, NameRegistry> registries;
    int experiment_counter = 0;
    int exercise_counter = 0;

    for (const std::string& subject : config.subjects) {
        NameRegistry& reg = registries[subject];
        for (int b = 1; b <= config.books_per_subject; ++b) {
            BookContent book;
            book.book.id = subject + "/b" + pad(b, 2);
            book.book.title = subject + " textbook " + std::to_string(b);
            book.book.subject = subject;
            book.book.stage = stage_for_book(b);
            book.book.order = b;

            for (int c = 1; c <= config.chapters_per_book; ++c) {
                // chapter titles draw from the word pool so chapter options
                // stay apart under surface-form filtering
                std::string chapter_title = std::string(kWordPool[rng.below(kWordPoolSize)]) +
                                            " and " + kWordPool[rng.below(kWordPoolSize)];
                for (int s = 1; s <= config.sections_per_chapter; ++s) {
                    SectionContent section;
                    section.entry.book_id = book.book.id;
                    section.entry.chapter_title = chapter_title;
                    section.entry.chapter_order = c;
                    section.entry.section_title = "section " + std::to_string(s);
                    section.entry.section_order = s;
                    section.entry.file = "ch" + pad(c, 2) + "_s" + pad(s, 2) + ".json";

                    SectionExtraction& ex = section.extraction;
                    std::set<std::string> section_names;
                    // local id -> (rank, kind) for edge orientation
                    std::vector<std::tuple<std::string, int, NodeKind>> ranked;
                    int local = 0;

                    auto fresh_words = [&](const char* suffix) {
                        for (int attempt = 0; attempt < 16; ++attempt) {
                            std::string name = std::string(kWordPool[rng.below(kWordPoolSize)]) +
                                               " " + kWordPool[rng.below(kWordPoolSize)];
                            if (*suffix) name += std::string(" ") + suffix;
                            if (!reg.used.count(name)) {
                                reg.used.insert(name);
                                return name;
                            }
                        }
                        std::string name = std::string(kWordPool[rng.below(kWordPoolSize)]) +
                                           " variant " + pad(++reg.name_counter, 3);
                        reg.used.insert(name);
                        return name;
                    };

                    auto pick_name = [&](std::vector<std::pair<std::string, int>>& pool,
                                         const char* suffix,
                                         double reuse_rate) -> std::pair<std::string, int> {
                        if (!pool.empty() && rng.unit() < reuse_rate) {
                            for (int attempt = 0; attempt < 8; ++attempt) {
                                auto& cand = pool[rng.below(pool.size())];
                                if (!section_names.count(cand.first)) return cand;
                            }
                        }
                        pool.emplace_back(fresh_words(suffix), reg.next_rank++);
                        return pool.back();
                    };

                    std::vector<std::string> concept_locals;
                    for (int i = 0; i < config.concepts_per_section; ++i) {
                        auto [name, rank] =
                            pick_name(reg.concepts, "", config.name_reuse_rate);
                        section_names.insert(name);
                        LocalNode n;
                        n.local_id = "n" + std::to_string(++local);
                        n.kind = NodeKind::Concept;
                        n.name = name;
                        static const char* importance[] = {"understand", "master", "important"};
                        n.props = {{"definition", "definition of " + name},
                                   {"importance", importance[rng.below(3)]}};
                        if (rng.below(4) == 0) n.props["formula"] = name + " = a * b";
                        concept_locals.push_back(n.local_id);
                        ranked.emplace_back(n.local_id, rank, NodeKind::Concept);
                        ex.nodes.push_back(std::move(n));
                    }
                    std::vector<std::string> skill_locals;
                    for (int i = 0; i < config.skills_per_section; ++i) {
                        auto [name, rank] =
                            pick_name(reg.skills, "method", config.name_reuse_rate / 2.0);
                        section_names.insert(name);
                        LocalNode n;
                        n.local_id = "n" + std::to_string(++local);
                        n.kind = NodeKind::Skill;
                        n.name = name;
                        n.props = {{"description", "how to use " + name}};
                        skill_locals.push_back(n.local_id);
                        ranked.emplace_back(n.local_id, rank, NodeKind::Skill);
                        ex.nodes.push_back(std::move(n));
                    }
                    std::vector<std::string> experiment_locals;
                    if (subject != "mathematics") {
                        for (int i = 0; i < config.experiments_per_section; ++i) {
                            ++experiment_counter;
                            LocalNode n;
                            n.local_id = "n" + std::to_string(++local);
                            n.kind = NodeKind::Experiment;
                            n.name = "measuring " + fresh_words("experiment");
                            n.props = {{"instruments", "ruler, timer, notebook"},
                                       {"is_student", static_cast<int>(rng.below(2))}};
                            if (rng.below(2) == 0) {
                                n.props["conclusion"] = "the measurement confirms " + n.name;
                            }
                            experiment_locals.push_back(n.local_id);
                            ex.nodes.push_back(std::move(n));
                        }
                    }
                    std::vector<std::string> exercise_locals;
                    for (int i = 0; i < config.exercises_per_section; ++i) {
                        LocalNode n;
                        n.local_id = "n" + std::to_string(++local);
                        n.kind = NodeKind::Exercise;
                        int num = ++exercise_counter;
                        const std::string& about_a =
                            ex.nodes[rng.below(concept_locals.size())].name;
                        const std::string& about_b =
                            ex.nodes[rng.below(concept_locals.size())].name;
                        char stem[256];
                        snprintf(stem, sizeof(stem),
                                 kStemTemplates[rng.below(kStemTemplateCount)], about_a.c_str(),
                                 about_b.c_str());
                        static const char* types[] = {"choice", "short_answer", "calculation"};
                        n.props = {{"stem", stem},
                                   {"answer", "answer " + pad(num, 5)},
                                   {"type", types[rng.below(3)]},
                                   {"difficulty", static_cast<int>(1 + rng.below(5))}};
                        n.name = stem;
                        exercise_locals.push_back(n.local_id);
                        ex.nodes.push_back(std::move(n));
                    }

                    auto rank_of = [&](const std::string& lid) {
                        for (const auto& [l, r, k] : ranked) {
                            if (l == lid) return r;
                        }
                        return -1;
                    };
                    auto kind_of = [&](const std::string& lid) {
                        for (const auto& [l, r, k] : ranked) {
                            if (l == lid) return k;
                        }
                        return NodeKind::Concept;
                    };

                    // taxonomy points down-rank, prerequisites point up-rank;
                    // ranks are global per (kind, name), so the merged
                    // subgraphs cannot acquire cycles
                    for (const auto& lid : concept_locals) {
                        if (rng.below(100) < 35) {
                            std::vector<std::string> parents;
                            for (const auto& other : concept_locals) {
                                if (rank_of(other) < rank_of(lid)) parents.push_back(other);
                            }
                            if (!parents.empty()) {
                                const std::string& parent = parents[rng.below(parents.size())];
                                ex.edges.push_back({EdgeKind::is_a, lid, parent,
                                                    "the text presents it as a special case"});
                            }
                        }
                        if (rng.below(100) < 30) {
                            const std::string& other =
                                concept_locals[rng.below(concept_locals.size())];
                            if (other != lid) {
                                ex.edges.push_back({EdgeKind::relates_to, lid, other,
                                                    "discussed together in the section"});
                            }
                        }
                    }
                    std::vector<std::string> cs_locals = concept_locals;
                    cs_locals.insert(cs_locals.end(), skill_locals.begin(), skill_locals.end());
                    for (const auto& lid : cs_locals) {
                        if (rng.below(100) < 45) {
                            std::vector<std::string> later;
                            for (const auto& other : cs_locals) {
                                if (rank_of(other) > rank_of(lid)) later.push_back(other);
                            }
                            if (!later.empty()) {
                                ex.edges.push_back(
                                    {EdgeKind::prerequisites_for, lid,
                                     later[rng.below(later.size())],
                                     "the section builds on it"});
                            }
                        }
                        if (!experiment_locals.empty() && kind_of(lid) == NodeKind::Concept &&
                            rng.below(100) < 15) {
                            ex.edges.push_back(
                                {EdgeKind::prerequisites_for, lid,
                                 experiment_locals[rng.below(experiment_locals.size())], ""});
                        }
                    }
                    for (const auto& lid : experiment_locals) {
                        size_t n_verified = 1 + rng.below(2);
                        std::set<std::string> chosen;
                        for (size_t i = 0; i < n_verified; ++i) {
                            chosen.insert(concept_locals[rng.below(concept_locals.size())]);
                        }
                        for (const auto& target : chosen) {
                            ex.edges.push_back({EdgeKind::verifies, lid, target,
                                                "the observed outcome matches the definition"});
                        }
                    }
                    for (const auto& lid : exercise_locals) {
                        std::set<std::string> tested;
                        size_t n_tested = 1 + rng.below(2);
                        for (size_t i = 0; i < n_tested; ++i) {
                            tested.insert(concept_locals[rng.below(concept_locals.size())]);
                        }
                        for (const auto& target : tested) {
                            ex.edges.push_back({EdgeKind::tests_concept, lid, target, ""});
                        }
                        if (!skill_locals.empty() && rng.below(100) < 50) {
                            ex.edges.push_back({EdgeKind::tests_skill, lid,
                                                skill_locals[rng.below(skill_locals.size())],
                                                ""});
                        }
                    }

                    book.sections.push_back(std::move(section));
                }
            }
            corpus.books.push_back(std::move(book));
        }
    }

    // chapter-level learning order: within books, across books of a subject,
    // and a few cross-subject links
    for (const BookContent& book : corpus.books) {
        for (int c = 1; c < config.chapters_per_book; ++c) {
            if (rng.below(100) < 60) {
                corpus.extra_edges.push_back({EdgeKind::leads_to,
                                              ingest::chapter_id_for(book.book, c),
                                              ingest::chapter_id_for(book.book, c + 1), ""});
            }
        }
    }
    for (const std::string& subject : config.subjects) {
        for (int b = 1; b < config.books_per_subject; ++b) {
            BookInfo prev, next;
            prev.id = subject + "/b" + pad(b, 2);
            next.id = subject + "/b" + pad(b + 1, 2);
            corpus.extra_edges.push_back(
                {EdgeKind::leads_to, ingest::chapter_id_for(prev, config.chapters_per_book),
                 ingest::chapter_id_for(next, 1), ""});
        }
    }
    for (size_t i = 0; i + 1 < config.subjects.size(); ++i) {
        BookInfo from, to;
        from.id = config.subjects[i] + "/b" + pad(1, 2);
        to.id = config.subjects[i + 1] + "/b" + pad(1, 2);
        corpus.extra_edges.push_back({EdgeKind::leads_to, ingest::chapter_id_for(from, 1),
                                      ingest::chapter_id_for(to, 2), ""});
    }
    return corpus;
}

} // namespace

Result<CorpusPaths> write_corpus(const FixtureConfig& config,
                                 const std::filesystem::path& dir) {
    Corpus corpus = generate(config);
    CorpusPaths paths;

    for (const BookContent& book : corpus.books) {
        std::string book_dir_name = book.book.subject + "_b" +
                                    pad(static_cast<int>(book.book.order), 2);
        std::filesystem::path book_dir = dir / "books" / book_dir_name;

        ingest::Manifest manifest;
        manifest.book = book.book;
        for (const SectionContent& s : book.sections) {
            manifest.entries.push_back(s.entry);
            auto st = jsonl::write_text_file(book_dir / "sections" / s.entry.file,
                                             extraction_to_json(s.extraction).dump(2) + "\n");
            if (!st.ok()) return st.error();
        }
        auto st = jsonl::write_text_file(book_dir / "manifest.json",
                                         manifest_to_json(manifest).dump(2) + "\n");
        if (!st.ok()) return st.error();
        paths.manifests.push_back(book_dir / "manifest.json");
    }

    nlohmann::json extra = nlohmann::json::array();
    for (const Edge& e : corpus.extra_edges) {
        extra.push_back({{"kind", graph::edge_kind_name(e.kind)},
                         {"source", e.source},
                         {"target", e.target}});
    }
    paths.extra_edges = dir / "extra_edges.json";
    auto st = jsonl::write_text_file(paths.extra_edges, extra.dump(2) + "\n");
    if (!st.ok()) return st.error();
    return paths;
}

Result<KnowledgeGraph> build_certified_graph(const FixtureConfig& config) {
    Corpus corpus = generate(config);

    std::map<std::string, std::vector<KnowledgeGraph>> books_by_subject;
    for (const BookContent& book : corpus.books) {
        std::vector<KnowledgeGraph> fragments;
        for (const SectionContent& s : book.sections) {
            auto fragment = ingest::build_section_graph(book.book, s.entry, s.extraction);
            if (!fragment.ok()) return fragment.error();
            fragments.push_back(std::move(fragment).value());
        }
        auto merged = merge::merge_book(fragments);
        if (!merged.ok()) return merged.error();
        books_by_subject[book.book.subject].push_back(std::move(merged.value().graph));
    }

    std::vector<KnowledgeGraph> subject_graphs;
    for (auto& [subject, books] : books_by_subject) {
        auto merged = merge::merge_subject(books);
        if (!merged.ok()) return merged.error();
        subject_graphs.push_back(std::move(merged.value().graph));
    }

    auto combined = merge::merge_union(subject_graphs, corpus.extra_edges);
    if (!combined.ok()) return combined.error();

    auto outcome = validate::certify(std::move(combined.value().graph));
    if (!outcome.certified) {
        std::string what = "synthetic graph failed certification:";
        for (size_t i = 0; i < outcome.violations.size() && i < 5; ++i) {
            what += " " + outcome.violations[i];
        }
        return Error{Errc::certification_failed, what};
    }
    return std::move(outcome.graph);
}

} // namespace kgforge::fixture
