#include "perdura/reengine.hpp"

#include <algorithm>

#include "perdura/boro.hpp"
#include "perdura/errors.hpp"

namespace perdura::reengine {

using nlohmann::json;

namespace {

std::string fact_key(const orm::FactType& fact) {
  return fact.subject + "." + fact.role + "." + fact.object;
}

void intern_builtin(Model& model, std::string_view name,
                    const std::string& origin) {
  std::string key(name);
  if (model.tuple_classes.count(key)) return;
  DraftTupleClass tc;
  tc.builtin = true;
  tc.origin = origin;
  model.tuple_classes.emplace(std::move(key), std::move(tc));
}

std::string constraint_label(const orm::OrmConstraint& constraint) {
  std::string label{orm::to_string(constraint.kind)};
  label += " " + constraint.target.subject + "." + constraint.target.role +
           "." + constraint.target.object;
  if (constraint.target.position == 2) label += "@2";
  if (constraint.kind == orm::ConstraintKind::cardinality)
    label += " " + std::to_string(constraint.cardinality);
  return label;
}

}  // namespace

std::string_view to_string(FactStatus status) {
  switch (status) {
    case FactStatus::pending: return "pending";
    case FactStatus::consumed: return "consumed";
    case FactStatus::lifted: return "lifted";
    case FactStatus::unconsumed: return "unconsumed";
    case FactStatus::dropped: return "dropped";
  }
  fail(Errc::invariant_violation, "unreachable fact status");
}

std::string FactRecord::key() const { return fact_key(fact); }

std::string SubtypeRecord::key() const {
  return edge.sub + " Is_A " + edge.super;
}

std::optional<std::string> Model::resolve_class(const std::string& ref) const {
  if (auto it = entity_class.find(ref); it != entity_class.end())
    return it->second;
  if (classes.count(ref)) return ref;
  return std::nullopt;
}

void Model::claim_fresh(const std::string& name) const {
  if (classes.count(name) || tuple_classes.count(name))
    fail(Errc::name_collision, "name '" + name + "' is already in use");
}

FactRecord* Model::find_pending_fact(const std::string& key) {
  for (auto& record : facts) {
    if (record.key() != key) continue;
    if (record.status != FactStatus::pending)
      fail(Errc::unknown_element,
           "fact '" + key + "' was already " +
               std::string(to_string(record.status)) +
               (record.note.empty() ? "" : " by " + record.note));
    return &record;
  }
  fail(Errc::unknown_element, "unknown fact '" + key + "'");
}

Model seed_model(const orm::OrmSchema& schema,
                 const std::map<std::string, std::string>& renames) {
  for (const auto& [entity, target] : renames)
    if (!schema.find_entity(entity))
      fail(Errc::unknown_element, "rename targets unknown entity '" + entity + "'");
  Model model;
  for (const auto& entity : schema.entities) {
    const auto rename = renames.find(entity.name);
    const std::string name =
        rename == renames.end() ? entity.name : rename->second;
    if (model.classes.count(name))
      fail(Errc::name_collision,
           "seeding maps two entities to the class name '" + name + "'");
    DraftClass draft;
    draft.role_tag =
        entity.lexical ? op::RoleTag::value_class : op::RoleTag::ordinary;
    draft.origin = "entity:" + entity.name;
    model.classes.emplace(name, std::move(draft));
    model.entity_class[entity.name] = name;
  }
  for (const auto& fact : schema.facts)
    model.facts.push_back({fact, FactStatus::pending, ""});
  for (const auto& edge : schema.subtypes)
    model.subtypes.push_back({edge, FactStatus::pending, ""});
  for (const auto& constraint : schema.constraints)
    model.constraints.push_back(constraint_label(constraint));
  return model;
}

void apply_refine_by_extent(Model& model, const std::string& source_class,
                            const std::string& whole_name,
                            const std::string& part_name,
                            const std::string& copy_name,
                            const std::string& copy_superclass,
                            const std::string& origin) {
  const auto source = model.resolve_class(source_class);
  if (!source) fail(Errc::unknown_class, "unknown class '" + source_class + "'");
  const auto super = model.resolve_class(copy_superclass);
  if (!super)
    fail(Errc::unknown_class, "unknown class '" + copy_superclass + "'");
  if (*super == *source)
    fail(Errc::name_collision, "copy superclass '" + copy_superclass +
                                   "' reuses the class being replaced");
  std::set<std::string> fresh;
  for (const auto* name : {&whole_name, &part_name, &copy_name}) {
    model.claim_fresh(*name);
    if (!fresh.insert(*name).second)
      fail(Errc::name_collision, "name '" + *name + "' is already in use");
  }
  for (const auto& [name, tc] : model.tuple_classes)
    if (tc.domain == *source || tc.range == *source)
      fail(Errc::invariant_violation, "class '" + *source +
                                          "' is still referenced by tuple class '" +
                                          name + "'");
  for (const auto& [name, draft] : model.classes) {
    if (draft.superclasses.count(*source))
      fail(Errc::invariant_violation,
           "class '" + *source + "' is still a superclass of '" + name + "'");
    for (const auto& edge : draft.edges)
      if (edge.to == *source)
        fail(Errc::invariant_violation,
             "class '" + *source + "' is still an edge target of '" + name + "'");
  }

  model.classes.erase(*source);
  model.dropped.emplace_back("class " + *source, origin);
  std::vector<std::string> orphaned;
  for (auto it = model.entity_class.begin(); it != model.entity_class.end();) {
    if (it->second == *source) {
      orphaned.push_back(it->first);
      it = model.entity_class.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& record : model.subtypes) {
    if (record.status != FactStatus::pending) continue;
    const bool touched =
        std::count(orphaned.begin(), orphaned.end(), record.edge.sub) ||
        std::count(orphaned.begin(), orphaned.end(), record.edge.super);
    if (!touched) continue;
    record.status = FactStatus::dropped;
    record.note = origin;
    model.dropped.emplace_back("subtype " + record.key(), origin);
  }

  model.classes[whole_name].origin = origin;
  model.classes[part_name].origin = origin;
  DraftClass& copy = model.classes[copy_name];
  copy.origin = origin;
  copy.superclasses.insert(*super);
  intern_builtin(model, op::kIsComposedOf, origin);
  model.classes[whole_name].edges.push_back(
      {std::string(op::kIsComposedOf), part_name, true});
  model.classes[part_name].edges.push_back(
      {std::string(op::kIsComposedOf), copy_name, false});
}

void apply_reattach_property(Model& model, const std::string& fact_key,
                             const std::string& new_domain,
                             const std::string& new_name,
                             const std::string& origin) {
  FactRecord* record = model.find_pending_fact(fact_key);
  const auto domain = model.resolve_class(new_domain);
  if (!domain) fail(Errc::unknown_element, "unknown class '" + new_domain + "'");
  const auto range = model.resolve_class(record->fact.object);
  if (!range)
    fail(Errc::unknown_element,
         "entity '" + record->fact.object + "' no longer has a class");
  model.claim_fresh(new_name);

  DraftTupleClass tc;
  tc.domain = *domain;
  tc.range = *range;
  tc.origin = origin;
  model.tuple_classes.emplace(new_name, std::move(tc));
  record->status = FactStatus::consumed;
  record->note = origin;
}

void apply_temporalize_property(Model& model, const std::string& fact_key,
                                const std::string& holder,
                                const std::string& state_name,
                                const std::string& event_name,
                                const std::vector<ChainLink>& chain,
                                const std::string& origin) {
  FactRecord* source = model.find_pending_fact(fact_key);
  const auto holder_class = model.resolve_class(holder);
  if (!holder_class) fail(Errc::unknown_element, "unknown class '" + holder + "'");

  std::set<std::string> fresh;
  auto claim = [&](const std::string& name) {
    model.claim_fresh(name);
    if (!fresh.insert(name).second)
      fail(Errc::name_collision, "name '" + name + "' is already in use");
  };
  claim(state_name);
  claim(event_name);

  // New class names are visible to chain links before anything is created.
  auto resolve_local = [&](const std::string& ref) -> std::optional<std::string> {
    if (ref == state_name || ref == event_name) return ref;
    return model.resolve_class(ref);
  };

  struct ResolvedLink {
    std::string name;
    std::string domain;
    std::string range;
    bool functional_in_time;
    FactRecord* consumes;
  };
  std::vector<ResolvedLink> links;
  std::set<std::string> consumed_keys{fact_key};
  std::string previous = state_name;
  for (const auto& link : chain) {
    claim(link.name);
    ResolvedLink resolved{link.name, previous, "", link.functional_in_time,
                          nullptr};
    if (link.domain) {
      const auto domain = resolve_local(*link.domain);
      if (!domain)
        fail(Errc::unknown_element, "unknown class '" + *link.domain + "'");
      resolved.domain = *domain;
    }
    const auto range = resolve_local(link.to);
    if (!range) fail(Errc::unknown_element, "unknown class '" + link.to + "'");
    resolved.range = *range;
    if (link.from_fact) {
      if (!consumed_keys.insert(*link.from_fact).second)
        fail(Errc::unknown_element,
             "fact '" + *link.from_fact + "' is consumed twice by this pattern");
      resolved.consumes = model.find_pending_fact(*link.from_fact);
    }
    links.push_back(std::move(resolved));
    previous = links.back().range;
  }

  DraftClass& state = model.classes[state_name];
  state.role_tag = op::RoleTag::state_class;
  state.origin = origin;
  DraftClass& event = model.classes[event_name];
  event.role_tag = op::RoleTag::event_class;
  event.origin = origin;
  if (!model.classes.count("TimeInstants"))
    model.classes["TimeInstants"].origin = origin;
  intern_builtin(model, op::kHasTemporalPart, origin);
  intern_builtin(model, op::kHappensAt, origin);
  model.classes.at(*holder_class)
      .edges.push_back({std::string(op::kHasTemporalPart), state_name, false});
  event.edges.push_back({std::string(op::kHappensAt), "TimeInstants", false});
  event.edges.push_back({std::string(op::kInitiates), state_name, false});
  event.edges.push_back({std::string(op::kDissolves), state_name, false});
  for (const auto& link : links) {
    DraftTupleClass tc;
    tc.domain = link.domain;
    tc.range = link.range;
    tc.functional_in_time = link.functional_in_time;
    tc.origin = origin;
    model.tuple_classes.emplace(link.name, std::move(tc));
    if (link.consumes) {
      link.consumes->status = FactStatus::consumed;
      link.consumes->note = origin;
    }
  }
  source->status = FactStatus::consumed;
  source->note = origin;
}

void apply_role_as_state(Model& model, const std::string& role_entity,
                         const std::string& broader_name,
                         const std::string& state_name,
                         const std::string& name_class_name,
                         const std::string& origin) {
  const auto role = model.resolve_class(role_entity);
  if (!role)
    fail(Errc::unknown_element, "unknown class or entity '" + role_entity + "'");
  std::set<std::string> fresh;
  auto claim = [&](const std::string& name) {
    model.claim_fresh(name);
    if (!fresh.insert(name).second)
      fail(Errc::name_collision, "name '" + name + "' is already in use");
  };
  claim(broader_name);
  claim(state_name);
  // Reusing the role's class as the name class keeps its identity; any other
  // name must be fresh and retires the role's class.
  const bool reuse = name_class_name == *role;
  if (!reuse) claim(name_class_name);
  model.claim_fresh("isNamedBy");

  // Participant references move from the role class to the broader class.
  for (auto& [name, tc] : model.tuple_classes) {
    if (tc.domain == *role) tc.domain = broader_name;
    if (tc.range == *role) tc.range = broader_name;
  }
  for (auto& [name, draft] : model.classes) {
    for (auto& edge : draft.edges)
      if (edge.to == *role) edge.to = broader_name;
    if (draft.superclasses.erase(*role)) draft.superclasses.insert(broader_name);
  }
  for (auto& [entity, class_name] : model.entity_class)
    if (class_name == *role) class_name = broader_name;

  if (reuse) {
    model.classes.at(*role).role_tag = op::RoleTag::value_class;
  } else {
    DraftClass names;
    names.role_tag = op::RoleTag::value_class;
    names.origin = origin;
    model.classes.erase(*role);
    model.dropped.emplace_back("class " + *role, origin);
    model.classes.emplace(name_class_name, std::move(names));
  }
  DraftClass& broader = model.classes[broader_name];
  broader.origin = origin;
  DraftClass& state = model.classes[state_name];
  state.role_tag = op::RoleTag::state_class;
  state.origin = origin;
  intern_builtin(model, op::kHasTemporalPart, origin);
  broader.edges.push_back(
      {std::string(op::kHasTemporalPart), state_name, false});
  DraftTupleClass named;
  named.domain = broader_name;
  named.range = name_class_name;
  named.origin = origin;
  model.tuple_classes.emplace("isNamedBy", std::move(named));
}

ReengineerResult finalize_model(Model& model, const json& answers,
                                const std::string& answers_ref) {
  for (auto& record : model.facts) {
    if (record.status != FactStatus::pending) continue;
    const auto domain = model.entity_class.find(record.fact.subject);
    const auto range = model.entity_class.find(record.fact.object);
    if (domain == model.entity_class.end() ||
        range == model.entity_class.end()) {
      const std::string& gone = domain == model.entity_class.end()
                                    ? record.fact.subject
                                    : record.fact.object;
      record.status = FactStatus::unconsumed;
      record.note = "entity '" + gone + "' has no surviving class";
      continue;
    }
    const std::string name = record.key();
    if (model.classes.count(name) || model.tuple_classes.count(name))
      fail(Errc::name_collision,
           "lifted fact name '" + name + "' is already in use");
    DraftTupleClass tc;
    tc.domain = domain->second;
    tc.range = range->second;
    tc.origin = "fact:" + name;
    model.tuple_classes.emplace(name, std::move(tc));
    record.status = FactStatus::lifted;
  }
  for (auto& record : model.subtypes) {
    if (record.status != FactStatus::pending) continue;
    const auto sub = model.entity_class.find(record.edge.sub);
    const auto super = model.entity_class.find(record.edge.super);
    if (sub == model.entity_class.end() || super == model.entity_class.end()) {
      const std::string& gone =
          sub == model.entity_class.end() ? record.edge.sub : record.edge.super;
      record.status = FactStatus::dropped;
      record.note = "entity '" + gone + "' has no surviving class";
      model.dropped.emplace_back("subtype " + record.key(), record.note);
      continue;
    }
    model.classes.at(sub->second).superclasses.insert(super->second);
    record.status = FactStatus::lifted;
  }

  // Every surviving concept must come out of the decision tree as a class.
  for (const auto& [name, draft] : model.classes) {
    const auto verdict = boro::classify(boro::probe_from_answers(name, answers));
    if (verdict.kind != boro::ObjectKind::object_class)
      fail(Errc::kind_mismatch, "answers classify '" + name + "' as " +
                                    std::string(boro::to_string(verdict.kind)) +
                                    "; a class is required");
  }

  ReengineerResult result;
  op::OpOntology& ontology = result.ontology;
  std::map<std::string, std::string> class_ids;
  std::map<std::string, std::string> tuple_ids;
  for (const auto& [name, draft] : model.classes)
    class_ids[name] = ontology.add_class({.name = name, .role_tag = draft.role_tag});
  for (const auto& [name, tc] : model.tuple_classes) {
    if (tc.builtin) {
      tuple_ids[name] = ontology.ensure_builtin(name);
      continue;
    }
    op::TupleClassDescription description;
    description.name = name;
    if (tc.domain) description.domain = class_ids.at(*tc.domain);
    if (tc.range) description.range = class_ids.at(*tc.range);
    description.functional_in_time = tc.functional_in_time;
    tuple_ids[name] = ontology.add_tuple_class(description);
  }
  for (const auto& [name, draft] : model.classes) {
    for (const auto& super : draft.superclasses)
      ontology.add_superclass(class_ids.at(name), class_ids.at(super));
    for (const auto& edge : draft.edges)
      ontology.add_edge(class_ids.at(name),
                        {edge.via, class_ids.at(edge.to), edge.sequenced});
  }
  ontology.validate();

  json elements = json::object();
  for (const auto& [name, draft] : model.classes)
    elements[class_ids.at(name)] = draft.origin;
  for (const auto& [name, tc] : model.tuple_classes)
    elements[tuple_ids.at(name)] = tc.origin;
  json facts = json::object();
  json unconsumed = json::array();
  for (const auto& record : model.facts) {
    facts[record.key()] = {{"detail", record.note},
                           {"status", std::string(to_string(record.status))}};
    if (record.status == FactStatus::unconsumed)
      unconsumed.push_back(record.key());
  }
  json subtypes = json::object();
  for (const auto& record : model.subtypes)
    subtypes[record.key()] = {{"detail", record.note},
                              {"status", std::string(to_string(record.status))}};
  json dropped = json::array();
  for (const auto& [element, cause] : model.dropped)
    dropped.push_back({{"cause", cause}, {"element", element}});
  result.provenance = {
      {"answers", answers_ref},
      {"constraints_not_lifted", model.constraints},
      {"dropped", dropped},
      {"elements", elements},
      {"facts", facts},
      {"subtypes", subtypes},
      {"unconsumed", unconsumed},
  };
  return result;
}

namespace {

const json& req(const json& value, const char* key, const std::string& context) {
  if (!value.is_object() || !value.contains(key))
    fail(Errc::syntax_error, context + ": missing '" + std::string(key) + "'");
  return value.at(key);
}

std::string req_str(const json& value, const char* key,
                    const std::string& context) {
  const json& field = req(value, key, context);
  if (!field.is_string())
    fail(Errc::syntax_error,
         context + ": '" + std::string(key) + "' must be a string");
  return field.get<std::string>();
}

std::optional<std::string> opt_str(const json& value, const char* key,
                                   const std::string& context) {
  if (!value.is_object() || !value.contains(key) || value.at(key).is_null())
    return std::nullopt;
  if (!value.at(key).is_string())
    fail(Errc::syntax_error,
         context + ": '" + std::string(key) + "' must be a string");
  return value.at(key).get<std::string>();
}

}  // namespace

ReengineerResult reengineer(const orm::OrmSchema& schema, const json& script,
                            const json& answers) {
  if (!script.is_object())
    fail(Errc::syntax_error, "script: top level must be an object");
  const std::string answers_ref = req_str(script, "answers", "script");
  std::map<std::string, std::string> renames;
  if (script.contains("renames")) {
    const json& mapping = script.at("renames");
    if (!mapping.is_object())
      fail(Errc::syntax_error, "script: 'renames' must be an object");
    for (auto it = mapping.begin(); it != mapping.end(); ++it) {
      if (!it.value().is_string())
        fail(Errc::syntax_error, "script: rename of '" + it.key() +
                                     "' must map to a string");
      renames[it.key()] = it.value().get<std::string>();
    }
  }
  Model model = seed_model(schema, renames);

  const json invocations = script.value("invocations", json::array());
  if (!invocations.is_array())
    fail(Errc::syntax_error, "script: 'invocations' must be an array");
  int index = 0;
  for (const json& invocation : invocations) {
    ++index;
    const std::string context = "invocation " + std::to_string(index);
    const std::string pattern = req_str(invocation, "pattern", context);
    const std::string origin = context + " (" + pattern + ")";
    try {
      if (pattern == "RefineByExtent") {
        apply_refine_by_extent(model, req_str(invocation, "source", context),
                               req_str(invocation, "whole", context),
                               req_str(invocation, "part", context),
                               req_str(invocation, "copy", context),
                               req_str(invocation, "copy_superclass", context),
                               origin);
      } else if (pattern == "ReattachProperty") {
        apply_reattach_property(model, req_str(invocation, "fact", context),
                                req_str(invocation, "domain", context),
                                req_str(invocation, "name", context), origin);
      } else if (pattern == "TemporalizeProperty") {
        std::vector<ChainLink> chain;
        if (invocation.contains("chain")) {
          if (!invocation.at("chain").is_array())
            fail(Errc::syntax_error, context + ": 'chain' must be an array");
          for (const json& link : invocation.at("chain")) {
            ChainLink resolved;
            resolved.name = req_str(link, "name", context);
            resolved.to = req_str(link, "to", context);
            resolved.domain = opt_str(link, "domain", context);
            resolved.from_fact = opt_str(link, "from_fact", context);
            if (link.contains("functional")) {
              if (!link.at("functional").is_boolean())
                fail(Errc::syntax_error,
                     context + ": 'functional' must be a boolean");
              resolved.functional_in_time = link.at("functional").get<bool>();
            }
            chain.push_back(std::move(resolved));
          }
        }
        apply_temporalize_property(model, req_str(invocation, "fact", context),
                                   req_str(invocation, "holder", context),
                                   req_str(invocation, "state", context),
                                   req_str(invocation, "event", context), chain,
                                   origin);
      } else if (pattern == "RoleAsState") {
        apply_role_as_state(model, req_str(invocation, "role", context),
                            req_str(invocation, "broader", context),
                            req_str(invocation, "state", context),
                            req_str(invocation, "names", context), origin);
      } else {
        fail(Errc::syntax_error, context + ": unknown pattern '" + pattern + "'");
      }
    } catch (const Error& error) {
      const std::string_view message = error.what();
      if (message.substr(0, context.size()) == context) throw;
      fail(error.code(), origin + ": " + error.what());
    }
  }
  return finalize_model(model, answers, answers_ref);
}

}  // namespace perdura::reengine
