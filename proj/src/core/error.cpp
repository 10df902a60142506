#include "kgforge/core/error.hpp"

namespace kgforge {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::schema_violation: return "SchemaViolation";
        case Errc::dangling_endpoint: return "DanglingEndpoint";
        case Errc::kind_violation: return "KindViolation";
        case Errc::self_loop: return "SelfLoop";
        case Errc::unknown_node: return "UnknownNode";
        case Errc::unanchored_node: return "UnanchoredNode";
        case Errc::not_validated: return "NotValidated";
        case Errc::not_frozen: return "NotFrozen";
        case Errc::frozen: return "Frozen";
        case Errc::malformed_document: return "MalformedDocument";
        case Errc::duplicate_section: return "DuplicateSection";
        case Errc::non_positive_order: return "NonPositiveOrder";
        case Errc::empty_section: return "EmptySection";
        case Errc::cross_book_fragment: return "CrossBookFragment";
        case Errc::mixed_subjects: return "MixedSubjects";
        case Errc::unsupported_kind: return "UnsupportedKind";
        case Errc::unknown_edge: return "UnknownEdge";
        case Errc::invalid_retarget: return "InvalidRetarget";
        case Errc::certification_failed: return "CertificationFailed";
        case Errc::empty_gold: return "EmptyGold";
        case Errc::insufficient_pool: return "InsufficientPool";
        case Errc::no_feasible_k: return "NoFeasibleK";
        case Errc::provider_failure: return "ProviderFailure";
        case Errc::judge_failure: return "JudgeFailure";
        case Errc::unsupported_edge_kind: return "UnsupportedEdgeKind";
        case Errc::missing_stem: return "MissingStem";
        case Errc::malformed: return "Malformed";
        case Errc::empty_field: return "EmptyField";
        case Errc::language_mismatch: return "LanguageMismatch";
        case Errc::parse_failure: return "ParseFailure";
        case Errc::empty_group: return "EmptyGroup";
        case Errc::invalid_k: return "InvalidK";
        case Errc::exhausted_retries: return "ExhaustedRetries";
        case Errc::ragged_table: return "RaggedTable";
        case Errc::too_few_annotators: return "TooFewAnnotators";
        case Errc::client_failure: return "ClientFailure";
        case Errc::io_error: return "IoError";
        case Errc::config_error: return "ConfigError";
    }
    return "UnknownError";
}

std::string Error::to_string() const {
    std::string out = errc_name(code);
    if (!message.empty()) {
        out += ": ";
        out += message;
    }
    return out;
}

} // namespace kgforge
