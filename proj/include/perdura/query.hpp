#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "perdura/ontology.hpp"
#include "perdura/orm.hpp"
#include "perdura/time.hpp"

namespace perdura::query {

/// A capability the model must provide: named concepts, a chain of relations
/// forming a connected path, and optionally temporal machinery.
struct CompetencyQuestion {
  std::string id;
  std::string description;
  std::vector<std::string> concepts;
  std::vector<std::string> chain;
  bool temporal = false;

  bool operator==(const CompetencyQuestion&) const = default;
};

/// Parses a JSON array of {id, description, concepts[], chain[], temporal}.
/// Throws MalformedCQ on shape problems or a temporal question that names no
/// state/event machinery in its concepts or chain.
std::vector<CompetencyQuestion> cqs_from_json(const nlohmann::json& doc);

/// Name comparison key: lowercase, plural endings reduced ("Prices" and
/// "Price" fold together, "Currencies" and "Currency" too).
std::string fold_name(std::string_view name);

struct SchemaRelation {
  std::string name;  // folded
  std::optional<std::string> domain;  // folded; nullopt = unrestricted
  std::optional<std::string> range;
};

/// Normalized concept/relation graph shared by both schema languages.
struct SchemaView {
  std::set<std::string> concepts;  // folded
  std::vector<SchemaRelation> relations;
  bool temporal_machinery = false;
};

/// Entity types become concepts and fact roles become relations; a flat
/// entity-relationship schema never carries temporal machinery.
SchemaView view_of(const orm::OrmSchema& schema);

/// Classes become concepts; tuple classes and class edges become relations.
/// Temporal machinery requires a state class, an event class, and a class of
/// time instants.
SchemaView view_of(const op::OpOntology& ontology);

struct Answerability {
  bool answerable = false;
  // Missing concepts and relations by their question-side names, then
  // "connected chain" or "temporal machinery" when those checks fail.
  std::vector<std::string> missing;
};

Answerability answerable(const SchemaView& view, const CompetencyQuestion& cq);

/// Distinct individuals of `part_class` reachable from the root (an
/// individual, or every member of a class) via one step of `relation`.
int count_parts(const op::OpOntology& ontology, const std::string& root,
                const std::string& relation, const std::string& part_class);

/// Objects of all (tuple_class, individual, _) tuples.
std::set<std::string> related(const op::OpOntology& ontology,
                              const std::string& individual,
                              const std::string& tuple_class);

struct HistoryEntry {
  TimeInterval interval;
  std::string value;

  bool operator==(const HistoryEntry&) const = default;
};

/// Chronological value history of a property over the individual, including
/// values carried by its temporal parts. Entries without an explicit validity
/// inherit the carrying subject's temporal extent.
std::vector<HistoryEntry> history(const op::OpOntology& ontology,
                                  const std::string& individual,
                                  const std::string& tuple_class);

/// The value in force at `at`, or nullopt outside every entry. Requires a
/// functional_in_time tuple class; throws NotFunctional otherwise.
std::optional<std::string> value_at(const op::OpOntology& ontology,
                                    const std::string& individual,
                                    const std::string& tuple_class,
                                    TimeInstant at);

struct InitiationResult {
  std::optional<TimeInstant> instant;
  std::vector<std::string> notes;
};

/// Instant of the event initiating the individual's earliest state in
/// `state_class`; nullopt (plus a note) when no state or no bound event
/// exists, with an ambiguity note when several states qualify.
InitiationResult state_initiation(const op::OpOntology& ontology,
                                  const std::string& individual,
                                  const std::string& state_class);

}  // namespace perdura::query
