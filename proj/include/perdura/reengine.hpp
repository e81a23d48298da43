#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "perdura/ontology.hpp"
#include "perdura/orm.hpp"

namespace perdura::reengine {

/// Mutable draft of a class while patterns are being applied. All references
/// (superclasses, edge targets) are by draft name; ids are claimed only when
/// the finished draft is emitted into an OpOntology.
struct DraftClass {
  op::RoleTag role_tag = op::RoleTag::ordinary;
  std::set<std::string> superclasses;
  std::vector<op::SchemaEdge> edges;
  std::string origin;
};

struct DraftTupleClass {
  std::optional<std::string> domain;
  std::optional<std::string> range;
  bool functional_in_time = false;
  bool builtin = false;
  std::string origin;
};

enum class FactStatus { pending, consumed, lifted, unconsumed, dropped };

std::string_view to_string(FactStatus status);

struct FactRecord {
  orm::FactType fact;
  FactStatus status = FactStatus::pending;
  std::string note;  // which invocation consumed/dropped it

  std::string key() const;  // "Subject.Role.Object"
};

struct SubtypeRecord {
  orm::SubtypeEdge edge;
  FactStatus status = FactStatus::pending;
  std::string note;

  std::string key() const;  // "Sub Is_A Super"
};

/// Working model during re-engineering: the evolving class/tuple-class draft
/// plus the worklist of source facts not yet lifted or consumed.
struct Model {
  std::map<std::string, DraftClass> classes;
  std::map<std::string, DraftTupleClass> tuple_classes;
  // Source entity name -> current draft class name. An erased entry means the
  // entity's class was removed and its remaining facts cannot be lifted.
  std::map<std::string, std::string> entity_class;
  std::vector<FactRecord> facts;
  std::vector<SubtypeRecord> subtypes;
  // Source constraints have no counterpart here; kept for the provenance
  // report so nothing vanishes silently.
  std::vector<std::string> constraints;
  // (element label, cause) for every removal, in removal order.
  std::vector<std::pair<std::string, std::string>> dropped;

  /// Resolves a source entity name or a current draft class name.
  std::optional<std::string> resolve_class(const std::string& ref) const;
  /// Throws NameCollision unless `name` is unused by classes and tuple classes.
  void claim_fresh(const std::string& name) const;
  FactRecord* find_pending_fact(const std::string& key);
};

/// Seeds a draft from an ORM schema: non-lexical entities become ordinary
/// classes, lexical entities become value classes, names mapped through
/// `renames`; facts and subtype rows enter the worklist untouched.
Model seed_model(const orm::OrmSchema& schema,
                 const std::map<std::string, std::string>& renames);

/// Splits one class into whole/part/copy linked by composition: the whole is
/// composed of temporally sequenced parts, each part is composed of copies,
/// and copies subclass `copy_superclass`. The source class is removed.
void apply_refine_by_extent(Model& model, const std::string& source_class,
                            const std::string& whole_name,
                            const std::string& part_name,
                            const std::string& copy_name,
                            const std::string& copy_superclass,
                            const std::string& origin = "manual");

/// Re-homes one pending fact as a tuple class under a new domain class,
/// keeping the fact's object class as range.
void apply_reattach_property(Model& model, const std::string& fact_key,
                             const std::string& new_domain,
                             const std::string& new_name,
                             const std::string& origin = "manual");

/// One link of a temporalized value chain. `domain` defaults to the previous
/// link's target (the new state class for the first link); `from_fact` names
/// a pending fact this link consumes.
struct ChainLink {
  std::string name;
  std::string to;
  std::optional<std::string> domain;
  bool functional_in_time = false;
  std::optional<std::string> from_fact;
};

/// Replaces one time-varying fact by a state class (temporal parts of the
/// holder), an event class wired to TimeInstants via happensAt and to the
/// state class via initiates/dissolves edges, and a chain of value tuple
/// classes starting at the state class.
void apply_temporalize_property(Model& model, const std::string& fact_key,
                                const std::string& holder,
                                const std::string& state_name,
                                const std::string& event_name,
                                const std::vector<ChainLink>& chain,
                                const std::string& origin = "manual");

/// Splits a role-played-by-people entity into a broader class of bearers, a
/// state class for the role (temporal parts of bearers), and a name value
/// class linked by isNamedBy. References to the role entity move to the
/// broader class.
void apply_role_as_state(Model& model, const std::string& role_entity,
                         const std::string& broader_name,
                         const std::string& state_name,
                         const std::string& name_class_name,
                         const std::string& origin = "manual");

struct ReengineerResult {
  op::OpOntology ontology;
  nlohmann::json provenance;
};

/// Lifts still-pending facts and surviving subtype rows, gates every class
/// through the decision-tree answers, and emits the validated ontology plus
/// a provenance document covering every element.
ReengineerResult finalize_model(Model& model, const nlohmann::json& answers,
                                const std::string& answers_ref);

/// Runs a whole decision script against an ORM schema. The script is a JSON
/// document with `answers` (file reference), optional `renames` (entity name
/// -> class name), and `invocations` (pattern applications in order).
ReengineerResult reengineer(const orm::OrmSchema& schema,
                            const nlohmann::json& script,
                            const nlohmann::json& answers);

}  // namespace perdura::reengine
