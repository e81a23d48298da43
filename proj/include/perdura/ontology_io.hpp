#pragma once

#include <string>

#include <json.hpp>

#include "perdura/ontology.hpp"

namespace perdura {

/// Reads a whole file; throws Error(Errc::io) when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Parses JSON text; throws Error(Errc::syntax_error) on malformed input.
nlohmann::json parse_json(const std::string& text, const std::string& origin);

/// Serializes any JSON value in the project's canonical form: two-space
/// indent, sorted keys, trailing newline. Byte-identical across runs.
std::string canonical_json_text(const nlohmann::json& value);

namespace op {

nlohmann::json interval_to_json(const TimeInterval& interval);
TimeInterval interval_from_json(const nlohmann::json& value);
nlohmann::json extent_to_json(const Extent& extent);
Extent extent_from_json(const nlohmann::json& value);

/// Canonical document: top-level arrays classes, tuple_classes, individuals,
/// tuples; element arrays sorted by id, tuples by their full key.
nlohmann::json ontology_to_json(const OpOntology& ontology);
std::string ontology_to_text(const OpOntology& ontology);
OpOntology ontology_from_json(const nlohmann::json& doc);

OpOntology load_ontology(const std::string& path);
void save_ontology(const OpOntology& ontology, const std::string& path);

/// Merges an instance document {individuals, tuples, bindings} into the
/// schema and validates the result. Individuals carry a "classes" array of
/// memberships; bindings are {event, initiates?, dissolves?}.
void load_instances(OpOntology& ontology, const nlohmann::json& doc);

/// One line per tuple: `<subject-id> <tuple-class-name> <object-id>` plus
/// `<start> <end|open>` when a validity interval is recorded. Sorted.
std::string export_triples(const OpOntology& ontology);

}  // namespace op
}  // namespace perdura
