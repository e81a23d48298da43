#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "perdura/time.hpp"

namespace perdura::op {

enum class Kind { ordinary, state, event };
enum class RoleTag { ordinary, state_class, event_class, value_class };

std::string_view to_string(Kind kind);
std::string_view to_string(RoleTag tag);
Kind kind_from_string(std::string_view text);
RoleTag role_tag_from_string(std::string_view text);

/// Class-level assertion that members of the owning class relate to members
/// of `to` via the named tuple class. `sequenced` marks composition edges
/// whose part individuals must carry strictly increasing interval starts.
struct SchemaEdge {
  std::string via;
  std::string to;
  bool sequenced = false;

  auto operator<=>(const SchemaEdge&) const = default;
};

struct OpClass {
  std::string id;
  std::string name;
  RoleTag role_tag = RoleTag::ordinary;
  std::set<std::string> members;       // individual ids
  std::set<std::string> superclasses;  // class ids
  std::vector<SchemaEdge> edges;
};

/// Type of binary relationships. Null domain/range means unrestricted; the
/// five built-in tuple classes (hasTemporalPart, happensAt, initiates,
/// dissolves, isComposedOf) are interned on demand with kind-based semantics
/// instead of class-based ones.
struct TupleClass {
  std::string id;
  std::string name;
  std::optional<std::string> domain;
  std::optional<std::string> range;
  bool functional_in_time = false;
};

struct Individual {
  std::string id;
  std::string name;
  Extent extent;
  Kind kind = Kind::ordinary;
  std::optional<std::string> whole;      // required iff kind == state
  std::optional<TimeInstant> instant;    // required iff kind == event
};

struct OpTuple {
  std::string tuple_class;
  std::string subject;
  std::string object;
  std::optional<TimeInterval> valid;

  bool operator==(const OpTuple&) const = default;
};

struct ClassDescription {
  std::string name;
  std::optional<std::string> id;
  RoleTag role_tag = RoleTag::ordinary;
  std::set<std::string> superclasses;
};

struct TupleClassDescription {
  std::string name;
  std::optional<std::string> id;
  std::optional<std::string> domain;
  std::optional<std::string> range;
  bool functional_in_time = false;
};

struct IndividualDescription {
  std::string name;
  std::optional<std::string> id;
  Kind kind = Kind::ordinary;
  Extent extent;
  std::optional<std::string> whole;
  std::optional<TimeInstant> instant;
  std::set<std::string> classes;  // memberships to record
};

using ObjectDescription = std::variant<ClassDescription, TupleClassDescription,
                                       IndividualDescription, OpTuple>;

inline constexpr std::string_view kHasTemporalPart = "hasTemporalPart";
inline constexpr std::string_view kHappensAt = "happensAt";
inline constexpr std::string_view kInitiates = "initiates";
inline constexpr std::string_view kDissolves = "dissolves";
inline constexpr std::string_view kIsComposedOf = "isComposedOf";

bool is_builtin_tuple_class(std::string_view name);

/// The validated 4D store. Mutations re-check invariants incrementally;
/// queries are pure over a const snapshot (single writer, many readers).
class OpOntology {
 public:
  const std::map<std::string, OpClass>& classes() const { return classes_; }
  const std::map<std::string, TupleClass>& tuple_classes() const {
    return tuple_classes_;
  }
  const std::map<std::string, Individual>& individuals() const {
    return individuals_;
  }
  const std::vector<OpTuple>& tuples() const { return tuples_; }

  const OpClass& cls(const std::string& id) const;
  const TupleClass& tuple_cls(const std::string& id) const;
  const Individual& individual(const std::string& id) const;

  bool has_class(const std::string& id) const { return classes_.count(id) > 0; }
  bool has_tuple_class(const std::string& id) const {
    return tuple_classes_.count(id) > 0;
  }
  bool has_individual(const std::string& id) const {
    return individuals_.count(id) > 0;
  }

  /// Resolves a tuple class by id, or failing that by unique name.
  const TupleClass* find_tuple_class(const std::string& ref) const;
  /// Resolves a class by id, or failing that by unique name.
  const OpClass* find_class(const std::string& ref) const;

  std::string add_object(const ObjectDescription& description);
  std::string add_class(const ClassDescription& description);
  std::string add_tuple_class(const TupleClassDescription& description);
  std::string add_individual(const IndividualDescription& description);
  void add_tuple(const OpTuple& tuple);

  /// Records a membership and propagates it through the superclass closure.
  void add_member(const std::string& class_id, const std::string& individual_id);
  void add_superclass(const std::string& class_id, const std::string& superclass_id);
  void add_edge(const std::string& class_id, SchemaEdge edge);

  /// Interns one of the five built-in tuple classes by name.
  std::string ensure_builtin(std::string_view name);

  /// Sum of the extents of the class's members, normalized.
  Extent class_extent(const std::string& class_ref) const;

  /// Extensionalist identity: equal normalized extents.
  bool same_individual(const std::string& a, const std::string& b) const;

  /// States whose whole is the given individual, chronological, optionally
  /// restricted to members of a state class.
  std::vector<const Individual*> temporal_parts(
      const std::string& individual_id,
      const std::optional<std::string>& state_class = std::nullopt) const;

  /// Records happensAt plus optional initiates/dissolves tuples. An initiated
  /// state must start at the event's instant; a dissolved one must end there.
  void bind_event(const std::string& event_id,
                  const std::optional<std::string>& initiated_state,
                  const std::optional<std::string>& dissolved_state);

  /// Transitive membership check (closure is maintained on mutation; this
  /// also follows superclass edges for safety on loaded data).
  bool is_member(const std::string& individual_id, const std::string& class_id) const;

  /// All classes reachable upward from `class_id`, including itself.
  std::set<std::string> superclass_closure(const std::string& class_id) const;

  /// Re-validates every store-wide invariant; throws on the first breach.
  void validate() const;

  /// Enforces strictly increasing part starts for sequenced composition
  /// edges. Called by instance loading; throws InvariantViolation.
  void check_sequenced_edges() const;

 private:
  std::string claim_id(const std::optional<std::string>& requested,
                       const std::string& name);
  void check_acyclic_from(const std::string& class_id) const;
  void check_state_within_whole(const Individual& state) const;
  void check_tuple(const OpTuple& tuple) const;
  void check_functional(const OpTuple& tuple) const;

  std::map<std::string, OpClass> classes_;
  std::map<std::string, TupleClass> tuple_classes_;
  std::map<std::string, Individual> individuals_;
  std::vector<OpTuple> tuples_;
};

}  // namespace perdura::op
