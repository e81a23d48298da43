#include "perdura/query.hpp"

#include <algorithm>
#include <cctype>

#include "perdura/errors.hpp"

namespace perdura::query {

using nlohmann::json;

std::string fold_name(std::string_view name) {
  std::string folded;
  folded.reserve(name.size());
  for (char c : name)
    folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (folded.size() > 3 && folded.ends_with("ies"))
    folded.replace(folded.size() - 3, 3, "y");
  else if (folded.size() > 1 && folded.back() == 's')
    folded.pop_back();
  return folded;
}

namespace {

constexpr std::string_view kTemporalRelations[] = {
    op::kHasTemporalPart, op::kHappensAt, op::kInitiates, op::kDissolves};

bool names_machinery(const CompetencyQuestion& cq) {
  for (const auto& relation : cq.chain)
    for (const auto builtin : kTemporalRelations)
      if (fold_name(relation) == fold_name(builtin)) return true;
  for (const auto& concept_name : cq.concepts)
    if (fold_name(concept_name) == "timeinstant") return true;
  return false;
}

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  fail(Errc::malformed_cq, where + ": " + what);
}

}  // namespace

std::vector<CompetencyQuestion> cqs_from_json(const json& doc) {
  if (!doc.is_array()) malformed("competency questions", "expected a JSON array");
  std::vector<CompetencyQuestion> questions;
  for (const json& row : doc) {
    const std::string where =
        "question " + std::to_string(questions.size() + 1);
    if (!row.is_object()) malformed(where, "expected an object");
    CompetencyQuestion cq;
    if (!row.contains("id") || !row.at("id").is_string())
      malformed(where, "'id' must be a string");
    cq.id = row.at("id").get<std::string>();
    if (row.contains("description")) {
      if (!row.at("description").is_string())
        malformed(cq.id, "'description' must be a string");
      cq.description = row.at("description").get<std::string>();
    }
    if (!row.contains("concepts") || !row.at("concepts").is_array())
      malformed(cq.id, "'concepts' must be an array");
    for (const json& name : row.at("concepts")) {
      if (!name.is_string()) malformed(cq.id, "concepts must be strings");
      cq.concepts.push_back(name.get<std::string>());
    }
    if (cq.concepts.empty()) malformed(cq.id, "at least one concept is required");
    if (row.contains("chain")) {
      if (!row.at("chain").is_array()) malformed(cq.id, "'chain' must be an array");
      for (const json& name : row.at("chain")) {
        if (!name.is_string()) malformed(cq.id, "chain entries must be strings");
        cq.chain.push_back(name.get<std::string>());
      }
    }
    if (row.contains("temporal")) {
      if (!row.at("temporal").is_boolean())
        malformed(cq.id, "'temporal' must be a boolean");
      cq.temporal = row.at("temporal").get<bool>();
    }
    if (cq.temporal && !names_machinery(cq))
      malformed(cq.id,
                "a temporal question must name state/event machinery in its "
                "concepts or chain");
    questions.push_back(std::move(cq));
  }
  return questions;
}

SchemaView view_of(const orm::OrmSchema& schema) {
  SchemaView view;
  for (const auto& entity : schema.entities)
    view.concepts.insert(fold_name(entity.name));
  for (const auto& fact : schema.facts)
    view.relations.push_back({fold_name(fact.role), fold_name(fact.subject),
                              fold_name(fact.object)});
  return view;
}

SchemaView view_of(const op::OpOntology& ontology) {
  SchemaView view;
  bool has_state = false, has_event = false, has_instants = false;
  for (const auto& [id, c] : ontology.classes()) {
    view.concepts.insert(fold_name(c.name));
    has_state |= c.role_tag == op::RoleTag::state_class;
    has_event |= c.role_tag == op::RoleTag::event_class;
    has_instants |= fold_name(c.name) == "timeinstant";
  }
  for (const auto& [id, tc] : ontology.tuple_classes()) {
    SchemaRelation relation{fold_name(tc.name), std::nullopt, std::nullopt};
    if (tc.domain) relation.domain = fold_name(ontology.cls(*tc.domain).name);
    if (tc.range) relation.range = fold_name(ontology.cls(*tc.range).name);
    view.relations.push_back(std::move(relation));
  }
  for (const auto& [id, c] : ontology.classes())
    for (const auto& edge : c.edges)
      view.relations.push_back({fold_name(edge.via), fold_name(c.name),
                                fold_name(ontology.cls(edge.to).name)});
  view.temporal_machinery = has_state && has_event && has_instants;
  return view;
}

namespace {

// Folded class names a chain step can end on, given where it can start.
// Unrestricted endpoints connect to anything, which the empty optional marks.
struct Frontier {
  bool unrestricted = false;
  std::set<std::string> at;

  bool meets(const std::optional<std::string>& domain) const {
    if (unrestricted || !domain) return true;
    return at.count(*domain) > 0;
  }
};

bool chain_connected(const SchemaView& view,
                     const std::vector<std::string>& chain) {
  Frontier frontier{true, {}};
  for (const auto& name : chain) {
    const std::string folded = fold_name(name);
    Frontier next;
    bool stepped = false;
    for (const auto& relation : view.relations) {
      if (relation.name != folded || !frontier.meets(relation.domain)) continue;
      stepped = true;
      if (relation.range)
        next.at.insert(*relation.range);
      else
        next.unrestricted = true;
    }
    if (!stepped) return false;
    frontier = std::move(next);
  }
  return true;
}

}  // namespace

Answerability answerable(const SchemaView& view, const CompetencyQuestion& cq) {
  if (cq.concepts.empty())
    fail(Errc::malformed_cq, cq.id + ": at least one concept is required");
  Answerability result;
  for (const auto& concept_name : cq.concepts)
    if (!view.concepts.count(fold_name(concept_name)))
      result.missing.push_back(concept_name);
  bool chain_present = true;
  for (const auto& relation_name : cq.chain) {
    const std::string folded = fold_name(relation_name);
    const bool present =
        std::any_of(view.relations.begin(), view.relations.end(),
                    [&](const SchemaRelation& r) { return r.name == folded; });
    if (!present) {
      result.missing.push_back(relation_name);
      chain_present = false;
    }
  }
  if (chain_present && !chain_connected(view, cq.chain))
    result.missing.push_back("connected chain");
  if (cq.temporal && !view.temporal_machinery)
    result.missing.push_back("temporal machinery");
  result.answerable = result.missing.empty();
  return result;
}

namespace {

const op::TupleClass& need_tuple_class(const op::OpOntology& ontology,
                                       const std::string& ref) {
  const op::TupleClass* tc = ontology.find_tuple_class(ref);
  if (!tc) fail(Errc::unknown_element, "unknown tuple class '" + ref + "'");
  return *tc;
}

const op::Individual& need_individual(const op::OpOntology& ontology,
                                      const std::string& ref) {
  if (!ontology.has_individual(ref))
    fail(Errc::unknown_element, "unknown individual '" + ref + "'");
  return ontology.individual(ref);
}

}  // namespace

int count_parts(const op::OpOntology& ontology, const std::string& root,
                const std::string& relation, const std::string& part_class) {
  const op::TupleClass& tc = need_tuple_class(ontology, relation);
  const op::OpClass* parts = ontology.find_class(part_class);
  if (!parts) fail(Errc::unknown_element, "unknown class '" + part_class + "'");

  std::set<std::string> roots;
  if (ontology.has_individual(root)) {
    roots.insert(root);
  } else if (const op::OpClass* c = ontology.find_class(root)) {
    roots = c->members;
  } else {
    fail(Errc::unknown_element, "unknown individual or class '" + root + "'");
  }

  std::set<std::string> found;
  for (const auto& tuple : ontology.tuples()) {
    if (tuple.tuple_class != tc.id || !roots.count(tuple.subject)) continue;
    if (!parts->members.count(tuple.object)) continue;
    found.insert(tuple.object);
  }
  return static_cast<int>(found.size());
}

std::set<std::string> related(const op::OpOntology& ontology,
                              const std::string& individual,
                              const std::string& tuple_class) {
  const op::TupleClass& tc = need_tuple_class(ontology, tuple_class);
  need_individual(ontology, individual);
  std::set<std::string> objects;
  for (const auto& tuple : ontology.tuples())
    if (tuple.tuple_class == tc.id && tuple.subject == individual)
      objects.insert(tuple.object);
  return objects;
}

std::vector<HistoryEntry> history(const op::OpOntology& ontology,
                                  const std::string& individual,
                                  const std::string& tuple_class) {
  const op::TupleClass& tc = need_tuple_class(ontology, tuple_class);
  need_individual(ontology, individual);

  std::vector<HistoryEntry> entries;
  for (const auto& tuple : ontology.tuples()) {
    if (tuple.tuple_class != tc.id) continue;
    // The property belongs to the individual when the tuple's subject is the
    // individual itself or one of its (transitive) temporal parts.
    const op::Individual* subject = &ontology.individual(tuple.subject);
    bool carried = false;
    for (const op::Individual* node = subject;;) {
      if (node->id == individual) {
        carried = true;
        break;
      }
      if (!node->whole) break;
      node = &ontology.individual(*node->whole);
    }
    if (!carried) continue;
    if (tuple.valid) {
      entries.push_back({*tuple.valid, tuple.object});
    } else {
      for (const auto& interval : subject->extent.temporal())
        entries.push_back({interval, tuple.object});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const HistoryEntry& a, const HistoryEntry& b) {
              if (a.interval.start != b.interval.start)
                return a.interval.start < b.interval.start;
              if (a.interval.end != b.interval.end) {
                if (!a.interval.end) return false;  // open end sorts last
                if (!b.interval.end) return true;
                return *a.interval.end < *b.interval.end;
              }
              return a.value < b.value;
            });
  return entries;
}

std::optional<std::string> value_at(const op::OpOntology& ontology,
                                    const std::string& individual,
                                    const std::string& tuple_class,
                                    TimeInstant at) {
  const op::TupleClass& tc = need_tuple_class(ontology, tuple_class);
  if (!tc.functional_in_time)
    fail(Errc::not_functional,
         "tuple class '" + tc.name + "' is not functional in time");
  for (const auto& entry : history(ontology, individual, tuple_class))
    if (entry.interval.contains(at)) return entry.value;
  return std::nullopt;
}

InitiationResult state_initiation(const op::OpOntology& ontology,
                                  const std::string& individual,
                                  const std::string& state_class) {
  need_individual(ontology, individual);
  const op::OpClass* states = ontology.find_class(state_class);
  if (!states) fail(Errc::unknown_element, "unknown class '" + state_class + "'");

  const auto parts = ontology.temporal_parts(individual, states->id);
  InitiationResult result;
  if (parts.empty()) return result;
  if (parts.size() > 1)
    result.notes.push_back("several states qualify; using the earliest");
  const op::Individual& earliest = *parts.front();

  const op::TupleClass* initiates =
      ontology.find_tuple_class(std::string(op::kInitiates));
  if (initiates) {
    for (const auto& tuple : ontology.tuples()) {
      if (tuple.tuple_class != initiates->id || tuple.object != earliest.id)
        continue;
      result.instant = ontology.individual(tuple.subject).instant;
      return result;
    }
  }
  result.notes.push_back("state '" + earliest.id + "' has no initiating event");
  return result;
}

}  // namespace perdura::query
