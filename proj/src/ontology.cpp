#include "perdura/ontology.hpp"

#include <algorithm>
#include <cctype>

namespace perdura::op {

namespace {

std::string slugify(const std::string& name) {
  std::string out;
  bool pending_dash = false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
        c == ':') {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(c);
    } else {
      pending_dash = true;
    }
  }
  if (out.empty()) out = "obj";
  return out;
}

std::optional<TimeInstant> earliest_start(const Extent& extent) {
  if (extent.temporal().empty()) return std::nullopt;
  return extent.temporal().front().start;
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::ordinary: return "ordinary";
    case Kind::state: return "state";
    case Kind::event: return "event";
  }
  return "ordinary";
}

std::string_view to_string(RoleTag tag) {
  switch (tag) {
    case RoleTag::ordinary: return "ordinary";
    case RoleTag::state_class: return "state-class";
    case RoleTag::event_class: return "event-class";
    case RoleTag::value_class: return "value-class";
  }
  return "ordinary";
}

Kind kind_from_string(std::string_view text) {
  if (text == "ordinary") return Kind::ordinary;
  if (text == "state") return Kind::state;
  if (text == "event") return Kind::event;
  fail(Errc::kind_mismatch, "unknown individual kind '" + std::string(text) + "'");
}

RoleTag role_tag_from_string(std::string_view text) {
  if (text == "ordinary") return RoleTag::ordinary;
  if (text == "state-class") return RoleTag::state_class;
  if (text == "event-class") return RoleTag::event_class;
  if (text == "value-class") return RoleTag::value_class;
  fail(Errc::kind_mismatch, "unknown class role tag '" + std::string(text) + "'");
}

bool is_builtin_tuple_class(std::string_view name) {
  return name == kHasTemporalPart || name == kHappensAt || name == kInitiates ||
         name == kDissolves || name == kIsComposedOf;
}

const OpClass& OpOntology::cls(const std::string& id) const {
  auto it = classes_.find(id);
  if (it == classes_.end()) fail(Errc::unknown_class, "no class '" + id + "'");
  return it->second;
}

const TupleClass& OpOntology::tuple_cls(const std::string& id) const {
  auto it = tuple_classes_.find(id);
  if (it == tuple_classes_.end())
    fail(Errc::unknown_element, "no tuple class '" + id + "'");
  return it->second;
}

const Individual& OpOntology::individual(const std::string& id) const {
  auto it = individuals_.find(id);
  if (it == individuals_.end())
    fail(Errc::unknown_individual, "no individual '" + id + "'");
  return it->second;
}

const TupleClass* OpOntology::find_tuple_class(const std::string& ref) const {
  auto it = tuple_classes_.find(ref);
  if (it != tuple_classes_.end()) return &it->second;
  const TupleClass* found = nullptr;
  for (const auto& [id, tc] : tuple_classes_) {
    if (tc.name != ref) continue;
    if (found) return nullptr;  // ambiguous name
    found = &tc;
  }
  return found;
}

const OpClass* OpOntology::find_class(const std::string& ref) const {
  auto it = classes_.find(ref);
  if (it != classes_.end()) return &it->second;
  const OpClass* found = nullptr;
  for (const auto& [id, c] : classes_) {
    if (c.name != ref) continue;
    if (found) return nullptr;  // ambiguous name
    found = &c;
  }
  return found;
}

std::string OpOntology::claim_id(const std::optional<std::string>& requested,
                                 const std::string& name) {
  auto taken = [this](const std::string& id) {
    return classes_.count(id) || tuple_classes_.count(id) ||
           individuals_.count(id);
  };
  if (requested) {
    if (requested->empty()) fail(Errc::duplicate_id, "empty id requested");
    if (taken(*requested)) fail(Errc::duplicate_id, "id '" + *requested + "' already in use");
    return *requested;
  }
  std::string base = slugify(name);
  if (!taken(base)) return base;
  for (int n = 2;; ++n) {
    std::string candidate = base + "-" + std::to_string(n);
    if (!taken(candidate)) return candidate;
  }
}

std::string OpOntology::add_object(const ObjectDescription& description) {
  return std::visit(
      [this](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ClassDescription>) {
          return add_class(d);
        } else if constexpr (std::is_same_v<T, TupleClassDescription>) {
          return add_tuple_class(d);
        } else if constexpr (std::is_same_v<T, IndividualDescription>) {
          return add_individual(d);
        } else {
          add_tuple(d);
          return {};
        }
      },
      description);
}

std::string OpOntology::add_class(const ClassDescription& description) {
  if (description.name.empty()) fail(Errc::invariant_violation, "class needs a name");
  for (const auto& super : description.superclasses) {
    if (!classes_.count(super))
      fail(Errc::dangling_ref, "superclass '" + super + "' does not exist");
  }
  std::string id = claim_id(description.id, description.name);
  OpClass& c = classes_[id];
  c.id = id;
  c.name = description.name;
  c.role_tag = description.role_tag;
  for (const auto& super : description.superclasses) add_superclass(id, super);
  return id;
}

std::string OpOntology::add_tuple_class(const TupleClassDescription& description) {
  if (description.name.empty())
    fail(Errc::invariant_violation, "tuple class needs a name");
  if (description.domain && !classes_.count(*description.domain))
    fail(Errc::dangling_ref, "domain class '" + *description.domain + "' does not exist");
  if (description.range && !classes_.count(*description.range))
    fail(Errc::dangling_ref, "range class '" + *description.range + "' does not exist");
  std::string id = claim_id(description.id, description.name);
  TupleClass& tc = tuple_classes_[id];
  tc.id = id;
  tc.name = description.name;
  tc.domain = description.domain;
  tc.range = description.range;
  tc.functional_in_time = description.functional_in_time;
  return id;
}

std::string OpOntology::add_individual(const IndividualDescription& description) {
  if (description.name.empty())
    fail(Errc::invariant_violation, "individual needs a name");
  for (const auto& c : description.classes) {
    if (!classes_.count(c))
      fail(Errc::unknown_class, "membership class '" + c + "' does not exist");
  }
  Individual ind;
  ind.name = description.name;
  ind.kind = description.kind;
  ind.extent = description.extent;
  ind.whole = description.whole;
  ind.instant = description.instant;
  switch (ind.kind) {
    case Kind::ordinary:
      if (ind.whole) fail(Errc::kind_mismatch, "'" + ind.name + "' is not a state but names a whole");
      if (ind.instant) fail(Errc::kind_mismatch, "'" + ind.name + "' is not an event but names an instant");
      break;
    case Kind::state:
      if (!ind.whole) fail(Errc::kind_mismatch, "state '" + ind.name + "' needs a whole");
      if (ind.instant) fail(Errc::kind_mismatch, "state '" + ind.name + "' must not name an instant");
      break;
    case Kind::event: {
      if (!ind.instant) fail(Errc::kind_mismatch, "event '" + ind.name + "' needs an instant");
      if (ind.whole) fail(Errc::kind_mismatch, "event '" + ind.name + "' must not name a whole");
      const auto point = TimeInterval::at_instant(*ind.instant);
      if (ind.extent.temporal().empty()) {
        ind.extent.add_interval(point);
      } else if (ind.extent.temporal() != std::vector<TimeInterval>{point}) {
        fail(Errc::instant_mismatch,
             "event '" + ind.name + "' extent disagrees with its instant");
      }
      break;
    }
  }
  std::string id = claim_id(description.id, description.name);
  ind.id = id;
  // Fail fast when the whole is already known; validate() re-checks all.
  if (ind.whole && individuals_.count(*ind.whole)) check_state_within_whole(ind);
  individuals_[id] = std::move(ind);
  for (const auto& c : description.classes) add_member(c, id);
  return id;
}

void OpOntology::add_tuple(const OpTuple& tuple) {
  check_tuple(tuple);
  check_functional(tuple);
  tuples_.push_back(tuple);
}

void OpOntology::add_member(const std::string& class_id,
                            const std::string& individual_id) {
  if (!individuals_.count(individual_id))
    fail(Errc::unknown_individual, "no individual '" + individual_id + "'");
  std::set<std::string> target = superclass_closure(class_id);
  for (const auto& c : target) classes_.at(c).members.insert(individual_id);
}

void OpOntology::add_superclass(const std::string& class_id,
                                const std::string& superclass_id) {
  OpClass& sub = classes_.at(cls(class_id).id);
  cls(superclass_id);
  if (class_id == superclass_id)
    fail(Errc::cyclic_subtype, "class '" + class_id + "' cannot specialize itself");
  sub.superclasses.insert(superclass_id);
  check_acyclic_from(class_id);
  // Existing members flow upward through the new link.
  for (const auto& member : std::set<std::string>(sub.members))
    add_member(superclass_id, member);
}

void OpOntology::add_edge(const std::string& class_id, SchemaEdge edge) {
  OpClass& c = classes_.at(cls(class_id).id);
  // Built-in names are valid edge labels even before any tuple of that
  // kind is interned; everything else must be a declared tuple class.
  if (!find_tuple_class(edge.via) && !is_builtin_tuple_class(edge.via))
    fail(Errc::unknown_element, "edge via unknown tuple class '" + edge.via + "'");
  cls(edge.to);
  if (std::find(c.edges.begin(), c.edges.end(), edge) == c.edges.end())
    c.edges.push_back(std::move(edge));
}

std::string OpOntology::ensure_builtin(std::string_view name) {
  if (!is_builtin_tuple_class(name))
    fail(Errc::unknown_element, "'" + std::string(name) + "' is not a built-in tuple class");
  std::string id(name);
  if (tuple_classes_.count(id)) return id;
  TupleClassDescription d;
  d.name = id;
  d.id = id;
  return add_tuple_class(d);
}

Extent OpOntology::class_extent(const std::string& class_ref) const {
  const OpClass* c = find_class(class_ref);
  if (!c) fail(Errc::unknown_class, "no class '" + class_ref + "'");
  Extent total;
  for (const auto& member : c->members)
    total = Extent::merge(total, individual(member).extent);
  return total;
}

bool OpOntology::same_individual(const std::string& a, const std::string& b) const {
  return individual(a).extent == individual(b).extent;
}

std::vector<const Individual*> OpOntology::temporal_parts(
    const std::string& individual_id,
    const std::optional<std::string>& state_class) const {
  individual(individual_id);
  const OpClass* filter = nullptr;
  if (state_class) {
    filter = find_class(*state_class);
    if (!filter) fail(Errc::unknown_class, "no class '" + *state_class + "'");
  }
  std::vector<const Individual*> parts;
  for (const auto& [id, ind] : individuals_) {
    if (ind.kind != Kind::state || ind.whole != individual_id) continue;
    if (filter && !filter->members.count(id)) continue;
    parts.push_back(&ind);
  }
  std::sort(parts.begin(), parts.end(),
            [](const Individual* x, const Individual* y) {
              const auto sx = earliest_start(x->extent);
              const auto sy = earliest_start(y->extent);
              if (sx != sy) return sx < sy;  // nullopt sorts first
              return x->id < y->id;
            });
  return parts;
}

void OpOntology::bind_event(const std::string& event_id,
                            const std::optional<std::string>& initiated_state,
                            const std::optional<std::string>& dissolved_state) {
  const Individual& event = individual(event_id);
  if (event.kind != Kind::event)
    fail(Errc::kind_mismatch, "'" + event_id + "' is not an event");
  const std::string iso = event.instant->to_string();
  const std::string instant_id = "t:" + iso;
  if (!individuals_.count(instant_id)) {
    IndividualDescription d;
    d.id = instant_id;
    d.name = iso;
    d.extent.add_interval(TimeInterval::at_instant(*event.instant));
    if (const OpClass* instants = find_class("TimeInstants"))
      d.classes.insert(instants->id);
    add_individual(d);
  }
  ensure_builtin(kHappensAt);
  const OpTuple at{std::string(kHappensAt), event_id, instant_id, std::nullopt};
  if (std::find(tuples_.begin(), tuples_.end(), at) == tuples_.end())
    add_tuple(at);
  if (initiated_state) {
    ensure_builtin(kInitiates);
    add_tuple({std::string(kInitiates), event_id, *initiated_state, std::nullopt});
  }
  if (dissolved_state) {
    ensure_builtin(kDissolves);
    add_tuple({std::string(kDissolves), event_id, *dissolved_state, std::nullopt});
  }
}

bool OpOntology::is_member(const std::string& individual_id,
                           const std::string& class_id) const {
  const OpClass& c = cls(class_id);
  if (c.members.count(individual_id)) return true;
  // Tolerate loaded data that lists memberships only on subclasses.
  for (const auto& [id, other] : classes_) {
    if (!other.members.count(individual_id)) continue;
    if (superclass_closure(id).count(class_id)) return true;
  }
  return false;
}

std::set<std::string> OpOntology::superclass_closure(const std::string& class_id) const {
  cls(class_id);
  std::set<std::string> seen;
  std::vector<std::string> queue{class_id};
  while (!queue.empty()) {
    std::string current = queue.back();
    queue.pop_back();
    if (!seen.insert(current).second) continue;
    for (const auto& super : cls(current).superclasses) queue.push_back(super);
  }
  return seen;
}

void OpOntology::check_acyclic_from(const std::string& class_id) const {
  std::set<std::string> visiting;
  std::vector<std::pair<std::string, bool>> stack{{class_id, false}};
  while (!stack.empty()) {
    auto [current, done] = stack.back();
    stack.pop_back();
    if (done) {
      visiting.erase(current);
      continue;
    }
    if (visiting.count(current))
      fail(Errc::cyclic_subtype, "cycle through class '" + current + "'");
    visiting.insert(current);
    stack.push_back({current, true});
    for (const auto& super : cls(current).superclasses)
      stack.push_back({super, false});
  }
}

void OpOntology::check_state_within_whole(const Individual& state) const {
  const Individual& whole = individual(*state.whole);
  const auto& sp = state.extent.spatial();
  const auto& wp = whole.extent.spatial();
  if (!std::includes(wp.begin(), wp.end(), sp.begin(), sp.end()))
    fail(Errc::invariant_violation,
         "state '" + state.id + "' occupies space outside its whole '" + whole.id + "'");
  if (!intervals_subset(state.extent.temporal(), whole.extent.temporal()))
    fail(Errc::invariant_violation,
         "state '" + state.id + "' extends beyond its whole '" + whole.id + "'");
}

void OpOntology::check_tuple(const OpTuple& tuple) const {
  const TupleClass& tc = tuple_cls(tuple.tuple_class);
  const auto sub_it = individuals_.find(tuple.subject);
  if (sub_it == individuals_.end())
    fail(Errc::dangling_ref, "tuple subject '" + tuple.subject + "' does not exist");
  const auto obj_it = individuals_.find(tuple.object);
  if (obj_it == individuals_.end())
    fail(Errc::dangling_ref, "tuple object '" + tuple.object + "' does not exist");
  const Individual& subject = sub_it->second;
  const Individual& object = obj_it->second;

  if (tc.domain && !is_member(subject.id, *tc.domain))
    fail(Errc::schema_mismatch, "subject '" + subject.id + "' is outside the domain of '" +
                                    tc.name + "'");
  if (tc.range && !is_member(object.id, *tc.range))
    fail(Errc::schema_mismatch,
         "object '" + object.id + "' is outside the range of '" + tc.name + "'");

  if (tc.name == kHasTemporalPart) {
    if (object.kind != Kind::state)
      fail(Errc::kind_mismatch, "'" + object.id + "' is not a state");
    if (!object.whole || *object.whole != subject.id)
      fail(Errc::kind_mismatch,
           "state '" + object.id + "' is not a part of '" + subject.id + "'");
  } else if (tc.name == kHappensAt) {
    if (subject.kind != Kind::event)
      fail(Errc::kind_mismatch, "'" + subject.id + "' is not an event");
    const auto point = TimeInterval::at_instant(*subject.instant);
    if (object.extent.temporal() != std::vector<TimeInterval>{point})
      fail(Errc::instant_mismatch,
           "'" + object.id + "' does not denote the instant of '" + subject.id + "'");
  } else if (tc.name == kInitiates || tc.name == kDissolves) {
    if (subject.kind != Kind::event)
      fail(Errc::kind_mismatch, "'" + subject.id + "' is not an event");
    if (object.kind != Kind::state)
      fail(Errc::kind_mismatch, "'" + object.id + "' is not a state");
    const auto& spans = object.extent.temporal();
    if (spans.empty())
      fail(Errc::instant_mismatch, "state '" + object.id + "' has no temporal extent");
    if (tc.name == kInitiates) {
      if (spans.front().start != *subject.instant)
        fail(Errc::instant_mismatch, "state '" + object.id +
                                         "' does not start at the instant of '" +
                                         subject.id + "'");
    } else {
      const auto& last = spans.back();
      if (!last.end || *last.end != *subject.instant)
        fail(Errc::instant_mismatch, "state '" + object.id +
                                         "' does not end at the instant of '" +
                                         subject.id + "'");
    }
  }

  if (tuple.valid && !tuple.valid->is_degenerate() && tuple.valid->end &&
      !(tuple.valid->start < *tuple.valid->end))
    fail(Errc::invariant_violation, "tuple validity interval is empty");
}

namespace {

/// Follows the whole chain to the top; cycles are caught by validate().
const Individual& ultimate_subject(const std::map<std::string, Individual>& all,
                                   const Individual& start) {
  const Individual* current = &start;
  std::set<std::string> seen;
  while (current->whole && seen.insert(current->id).second) {
    auto it = all.find(*current->whole);
    if (it == all.end()) break;
    current = &it->second;
  }
  return *current;
}

std::vector<TimeInterval> effective_validity(const OpTuple& tuple,
                                             const Individual& subject) {
  if (tuple.valid) return {*tuple.valid};
  return subject.extent.temporal();
}

}  // namespace

void OpOntology::check_functional(const OpTuple& tuple) const {
  const TupleClass& tc = tuple_cls(tuple.tuple_class);
  if (!tc.functional_in_time) return;
  const Individual& subject = individual(tuple.subject);
  const Individual& owner = ultimate_subject(individuals_, subject);
  const auto spans = effective_validity(tuple, subject);
  for (const auto& other : tuples_) {
    if (other.tuple_class != tuple.tuple_class) continue;
    if (other.object == tuple.object) continue;
    const Individual& other_subject = individual(other.subject);
    if (ultimate_subject(individuals_, other_subject).id != owner.id) continue;
    if (intervals_overlap(spans, effective_validity(other, other_subject)))
      fail(Errc::not_functional,
           "'" + tc.name + "' would hold two values at once for '" + owner.id + "'");
  }
}

void OpOntology::validate() const {
  for (const auto& [id, c] : classes_) {
    check_acyclic_from(id);
    for (const auto& super : c.superclasses) {
      const OpClass& sc = cls(super);
      for (const auto& member : c.members) {
        if (!sc.members.count(member))
          fail(Errc::invariant_violation, "member '" + member +
                                              "' of '" + id +
                                              "' is missing from superclass '" + super + "'");
      }
    }
    for (const auto& member : c.members) individual(member);
    for (const auto& edge : c.edges) {
      if (!find_tuple_class(edge.via) && !is_builtin_tuple_class(edge.via))
        fail(Errc::unknown_element, "edge via unknown tuple class '" + edge.via + "'");
      cls(edge.to);
    }
  }
  for (const auto& [id, ind] : individuals_) {
    if (ind.kind == Kind::state) {
      if (!ind.whole) fail(Errc::kind_mismatch, "state '" + id + "' needs a whole");
      individual(*ind.whole);
      check_state_within_whole(ind);
      // The whole chain must not loop back.
      std::set<std::string> seen{id};
      const Individual* current = &ind;
      while (current->whole) {
        if (!seen.insert(*current->whole).second)
          fail(Errc::invariant_violation, "whole chain of '" + id + "' loops");
        current = &individual(*current->whole);
      }
    } else if (ind.kind == Kind::event) {
      if (!ind.instant) fail(Errc::kind_mismatch, "event '" + id + "' needs an instant");
      const auto point = TimeInterval::at_instant(*ind.instant);
      if (ind.extent.temporal() != std::vector<TimeInterval>{point})
        fail(Errc::instant_mismatch, "event '" + id + "' extent disagrees with its instant");
    } else {
      if (ind.whole) fail(Errc::kind_mismatch, "'" + id + "' is not a state but names a whole");
      if (ind.instant) fail(Errc::kind_mismatch, "'" + id + "' is not an event but names an instant");
    }
  }
  for (const auto& tuple : tuples_) check_tuple(tuple);
  for (size_t i = 0; i < tuples_.size(); ++i) {
    const auto& tuple = tuples_[i];
    const TupleClass& tc = tuple_cls(tuple.tuple_class);
    if (!tc.functional_in_time) continue;
    const Individual& subject = individual(tuple.subject);
    const Individual& owner = ultimate_subject(individuals_, subject);
    const auto spans = effective_validity(tuple, subject);
    for (size_t j = i + 1; j < tuples_.size(); ++j) {
      const auto& other = tuples_[j];
      if (other.tuple_class != tuple.tuple_class || other.object == tuple.object)
        continue;
      const Individual& other_subject = individual(other.subject);
      if (ultimate_subject(individuals_, other_subject).id != owner.id) continue;
      if (intervals_overlap(spans, effective_validity(other, other_subject)))
        fail(Errc::not_functional,
             "'" + tc.name + "' holds two values at once for '" + owner.id + "'");
    }
  }
  check_sequenced_edges();
}

void OpOntology::check_sequenced_edges() const {
  for (const auto& [class_id, c] : classes_) {
    for (const auto& edge : c.edges) {
      if (!edge.sequenced) continue;
      const TupleClass* via = find_tuple_class(edge.via);
      if (!via) continue;  // no interned tuple class means no tuples to order
      const OpClass& target = cls(edge.to);
      for (const auto& whole_id : c.members) {
        std::vector<const Individual*> parts;
        for (const auto& tuple : tuples_) {
          if (tuple.tuple_class != via->id || tuple.subject != whole_id) continue;
          if (!target.members.count(tuple.object)) continue;
          parts.push_back(&individual(tuple.object));
        }
        std::vector<TimeInstant> starts;
        for (const Individual* part : parts) {
          const auto start = earliest_start(part->extent);
          if (!start)
            fail(Errc::invariant_violation,
                 "sequenced part '" + part->id + "' has no temporal extent");
          starts.push_back(*start);
        }
        std::sort(starts.begin(), starts.end());
        if (std::adjacent_find(starts.begin(), starts.end()) != starts.end())
          fail(Errc::invariant_violation,
               "parts of '" + whole_id + "' via '" + via->name +
                   "' do not form a sequence of distinct starts");
      }
    }
  }
}

}  // namespace perdura::op
