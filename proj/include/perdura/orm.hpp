#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perdura/errors.hpp"

namespace perdura::orm {

enum class ConstraintKind {
  uniqueness,
  mandatory,
  asymmetry,
  intransitivity,
  cardinality
};

std::string_view to_string(ConstraintKind kind);
ConstraintKind constraint_kind_from_string(std::string_view text);

struct EntityType {
  std::string name;
  bool lexical = false;
  std::optional<std::string> reference_mode;  // non-lexical entities only

  bool operator==(const EntityType&) const = default;
};

struct FactType {
  std::string subject;
  std::string role;
  std::string object;

  bool operator==(const FactType&) const = default;
};

struct SubtypeEdge {
  std::string sub;
  std::string super;

  bool operator==(const SubtypeEdge&) const = default;
};

/// Names a fact by its full triple; position selects the constrained role
/// end (1 = subject side, 2 = object side).
struct ConstraintTarget {
  std::string subject;
  std::string role;
  std::string object;
  int position = 1;

  bool operator==(const ConstraintTarget&) const = default;
};

struct OrmConstraint {
  ConstraintKind kind = ConstraintKind::uniqueness;
  ConstraintTarget target;
  int cardinality = 0;  // meaningful only for ConstraintKind::cardinality

  bool operator==(const OrmConstraint&) const = default;
};

/// All lists preserve declaration order; order drives verbalization and
/// printing, so it is part of the schema's identity.
struct OrmSchema {
  std::vector<EntityType> entities;
  std::vector<FactType> facts;
  std::vector<SubtypeEdge> subtypes;
  std::vector<OrmConstraint> constraints;

  const EntityType* find_entity(const std::string& name) const;
  const FactType* find_fact(const ConstraintTarget& target) const;

  bool operator==(const OrmSchema&) const = default;
};

/// Line-oriented DSL:
///   entity <Name> lexical|nonlexical
///   fact <Subject> <Role> <Object>          (role Is_A declares a subtype)
///   identifier <Entity> by <LexicalEntity>
///   constraint <kind> <Subject>.<Role>.<Object>[@1|@2] [n]
/// `#` starts a comment. Entities may be declared anywhere in the file.
OrmSchema parse_orm(const std::string& text);

/// Canonical DSL rendering; parse_orm(print_orm(s)) == s.
std::string print_orm(const OrmSchema& schema);

struct Finding {
  std::string code;     // MissingIdentifier, DanglingReferenceMode, DanglingConstraint
  std::string subject;  // offending entity or constraint target
  std::string message;

  bool operator==(const Finding&) const = default;
};

/// Soft integrity findings; an empty list means the schema is clean. An
/// entity counts as identified when it carries a reference mode or some
/// subtype of it is identified.
std::vector<Finding> validate(const OrmSchema& schema);

/// One sentence per fact, subtype edge, and constraint, declaration order.
std::vector<std::string> verbalize(const OrmSchema& schema);

nlohmann::json schema_to_json(const OrmSchema& schema);
OrmSchema schema_from_json(const nlohmann::json& doc);

}  // namespace perdura::orm
