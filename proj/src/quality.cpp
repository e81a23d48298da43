#include "perdura/quality.hpp"

#include <algorithm>
#include <set>

#include "perdura/errors.hpp"

namespace perdura::quality {

using nlohmann::json;

std::string_view to_string(Deficiency category) {
  switch (category) {
    case Deficiency::overload: return "overload";
    case Deficiency::redundancy: return "redundancy";
    case Deficiency::excess: return "excess";
    case Deficiency::deficit: return "deficit";
  }
  fail(Errc::invariant_violation, "unknown deficiency category");
}

ReferenceConceptualization reference_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("concepts") ||
      !doc.at("concepts").is_array())
    fail(Errc::syntax_error, "reference: 'concepts' must be an array");
  ReferenceConceptualization ref;
  std::set<std::string> seen;
  for (const json& name : doc.at("concepts")) {
    if (!name.is_string())
      fail(Errc::syntax_error, "reference: concepts must be strings");
    const auto concept_name = name.get<std::string>();
    if (!seen.insert(concept_name).second)
      fail(Errc::syntax_error,
           "reference: duplicate concept '" + concept_name + "'");
    ref.concepts.push_back(concept_name);
  }
  if (doc.contains("mapping")) {
    if (!doc.at("mapping").is_object())
      fail(Errc::syntax_error, "reference: 'mapping' must be an object");
    for (const auto& [concept_name, ids] : doc.at("mapping").items()) {
      if (!ids.is_array())
        fail(Errc::syntax_error, "reference: mapping of '" + concept_name +
                                     "' must be an array");
      for (const json& id : ids) {
        if (!id.is_string())
          fail(Errc::syntax_error, "reference: mapping of '" + concept_name +
                                       "' must hold element ids");
        ref.mapping[concept_name].push_back(id.get<std::string>());
      }
    }
  }
  return ref;
}

std::vector<std::string> object_elements(const orm::OrmSchema& schema) {
  std::vector<std::string> elements;
  for (const auto& entity : schema.entities) elements.push_back(entity.name);
  return elements;
}

std::vector<std::string> object_elements(const op::OpOntology& ontology) {
  std::vector<std::string> elements;
  for (const auto& [id, c] : ontology.classes()) elements.push_back(id);
  return elements;
}

std::vector<QualityFinding> detect_deficiencies(
    const std::vector<std::string>& elements,
    const ReferenceConceptualization& ref) {
  std::set<std::string> universe(elements.begin(), elements.end());
  std::set<std::string> declared;
  for (const auto& concept_name : ref.concepts)
    if (!declared.insert(concept_name).second)
      fail(Errc::syntax_error, "duplicate concept '" + concept_name + "'");
  for (const auto& [concept_name, ids] : ref.mapping) {
    if (!declared.count(concept_name))
      fail(Errc::dangling_mapping,
           "mapping names undeclared concept '" + concept_name + "'");
    for (const auto& id : ids)
      if (!universe.count(id))
        fail(Errc::dangling_mapping, "concept '" + concept_name +
                                         "' maps to unknown element '" + id +
                                         "'");
  }

  // Concepts claiming each element, in concept declaration order; the first
  // claimant owns the element, later ones ride along without representation.
  std::map<std::string, std::vector<std::string>> claimants;
  std::map<std::string, std::set<std::string>> targets;
  for (const auto& concept_name : ref.concepts) {
    const auto it = ref.mapping.find(concept_name);
    if (it == ref.mapping.end()) continue;
    for (const auto& id :
         std::set<std::string>(it->second.begin(), it->second.end())) {
      claimants[id].push_back(concept_name);
      targets[concept_name].insert(id);
    }
  }
  std::set<std::string> owners;
  for (const auto& [id, concepts] : claimants) owners.insert(concepts.front());

  std::vector<QualityFinding> findings;
  const auto emit = [&](Deficiency category, const std::string& subject,
                        std::vector<std::string> details) {
    std::sort(details.begin(), details.end());
    findings.push_back({category, subject, std::move(details)});
  };
  for (const auto& [id, concepts] : claimants)
    if (concepts.size() >= 2) emit(Deficiency::overload, id, concepts);
  for (const auto& concept_name : ref.concepts) {
    const auto it = targets.find(concept_name);
    if (it != targets.end() && it->second.size() >= 2)
      emit(Deficiency::redundancy, concept_name,
           {it->second.begin(), it->second.end()});
  }
  for (const auto& id : universe)
    if (!claimants.count(id)) emit(Deficiency::excess, id, {});
  for (const auto& concept_name : ref.concepts)
    if (!owners.count(concept_name)) emit(Deficiency::deficit, concept_name, {});

  std::stable_sort(findings.begin(), findings.end(),
                   [](const QualityFinding& a, const QualityFinding& b) {
                     if (a.category != b.category) return a.category < b.category;
                     return a.subject < b.subject;
                   });
  return findings;
}

std::vector<QualityFinding> detect_deficiencies(
    const orm::OrmSchema& schema, const ReferenceConceptualization& ref) {
  return detect_deficiencies(object_elements(schema), ref);
}

std::vector<QualityFinding> detect_deficiencies(
    const op::OpOntology& ontology, const ReferenceConceptualization& ref) {
  return detect_deficiencies(object_elements(ontology), ref);
}

std::vector<CqVerdict> cq_coverage(
    const query::SchemaView& view,
    const std::vector<query::CompetencyQuestion>& questions) {
  std::vector<CqVerdict> matrix;
  for (const auto& cq : questions) {
    const auto verdict = query::answerable(view, cq);
    matrix.push_back({cq.id, verdict.answerable, verdict.missing});
  }
  return matrix;
}

namespace {

// Definition fingerprints: the parts of an element that client code can
// depend on. Instance membership is deliberately excluded.
json fingerprint(const op::OpClass& c) {
  json edges = json::array();
  std::vector<const op::SchemaEdge*> sorted_edges;
  for (const auto& edge : c.edges) sorted_edges.push_back(&edge);
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const op::SchemaEdge* a, const op::SchemaEdge* b) {
              return std::tie(a->via, a->to, a->sequenced) <
                     std::tie(b->via, b->to, b->sequenced);
            });
  for (const auto* edge : sorted_edges)
    edges.push_back({{"via", edge->via},
                     {"to", edge->to},
                     {"sequenced", edge->sequenced}});
  std::vector<std::string> supers(c.superclasses.begin(), c.superclasses.end());
  std::sort(supers.begin(), supers.end());
  return {{"name", c.name},
          {"role_tag", std::string(op::to_string(c.role_tag))},
          {"superclasses", supers},
          {"edges", edges}};
}

json fingerprint(const op::TupleClass& tc) {
  return {{"name", tc.name},
          {"domain", tc.domain ? json(*tc.domain) : json()},
          {"range", tc.range ? json(*tc.range) : json()},
          {"functional_in_time", tc.functional_in_time}};
}

std::string constraint_stamp(const orm::OrmConstraint& constraint) {
  std::string stamp = std::string(orm::to_string(constraint.kind)) + "@" +
                      std::to_string(constraint.target.position);
  if (constraint.kind == orm::ConstraintKind::cardinality)
    stamp += " " + std::to_string(constraint.cardinality);
  return stamp;
}

std::string fact_key(const orm::FactType& fact) {
  return fact.subject + "." + fact.role + "." + fact.object;
}

void diff_bucket(const std::map<std::string, json>& before,
                 const std::map<std::string, json>& after,
                 std::vector<std::string>& added,
                 std::vector<std::string>& removed,
                 std::vector<std::string>& modified) {
  for (const auto& [id, fp] : after) {
    const auto it = before.find(id);
    if (it == before.end())
      added.push_back(id);
    else if (it->second != fp)
      modified.push_back(id);
  }
  for (const auto& [id, fp] : before)
    if (!after.count(id)) removed.push_back(id);
}

}  // namespace

DiffSummary extensibility_diff(const op::OpOntology& before,
                               const op::OpOntology& after) {
  const auto snapshot = [](const op::OpOntology& ontology) {
    std::pair<std::map<std::string, json>, std::map<std::string, json>> maps;
    for (const auto& [id, c] : ontology.classes())
      maps.first[id] = fingerprint(c);
    for (const auto& [id, tc] : ontology.tuple_classes())
      maps.second[id] = fingerprint(tc);
    return maps;
  };
  const auto [before_classes, before_tuples] = snapshot(before);
  const auto [after_classes, after_tuples] = snapshot(after);
  DiffSummary diff;
  diff_bucket(before_classes, after_classes, diff.added_classes,
              diff.removed_classes, diff.modified_classes);
  diff_bucket(before_tuples, after_tuples, diff.added_tuple_classes,
              diff.removed_tuple_classes, diff.modified_tuple_classes);
  return diff;
}

DiffSummary extensibility_diff(const orm::OrmSchema& before,
                               const orm::OrmSchema& after) {
  const auto snapshot = [](const orm::OrmSchema& schema) {
    std::pair<std::map<std::string, json>, std::map<std::string, json>> maps;
    for (const auto& entity : schema.entities) {
      // Supertype links are part of the subtype's definition, as are the
      // reference mode and lexicality.
      std::vector<std::string> supers;
      for (const auto& edge : schema.subtypes)
        if (edge.sub == entity.name) supers.push_back(edge.super);
      std::sort(supers.begin(), supers.end());
      maps.first[entity.name] = {
          {"lexical", entity.lexical},
          {"reference_mode",
           entity.reference_mode ? json(*entity.reference_mode) : json()},
          {"supertypes", supers}};
    }
    for (const auto& fact : schema.facts) {
      std::vector<std::string> stamps;
      for (const auto& constraint : schema.constraints)
        if (constraint.target.subject == fact.subject &&
            constraint.target.role == fact.role &&
            constraint.target.object == fact.object)
          stamps.push_back(constraint_stamp(constraint));
      std::sort(stamps.begin(), stamps.end());
      maps.second[fact_key(fact)] = {{"constraints", stamps}};
    }
    return maps;
  };
  const auto [before_classes, before_facts] = snapshot(before);
  const auto [after_classes, after_facts] = snapshot(after);
  DiffSummary diff;
  diff_bucket(before_classes, after_classes, diff.added_classes,
              diff.removed_classes, diff.modified_classes);
  diff_bucket(before_facts, after_facts, diff.added_tuple_classes,
              diff.removed_tuple_classes, diff.modified_tuple_classes);
  return diff;
}

namespace {

Objectivity objectivity_of(const ReferenceConceptualization& ref,
                           const std::optional<json>& provenance) {
  Objectivity result;
  if (!provenance) return result;
  if (provenance->contains("answers") && provenance->at("answers").is_string())
    result.trace = provenance->at("answers").get<std::string>();
  if (!provenance->contains("elements") || !provenance->at("elements").is_object())
    return result;
  const json& elements = provenance->at("elements");
  for (const auto& [concept_name, ids] : ref.mapping)
    for (const auto& id : ids)
      if (!elements.contains(id)) return result;
  result.objective = true;
  return result;
}

template <typename Schema>
QualityReport assemble(const Schema& schema,
                       const ReferenceConceptualization& ref,
                       const std::vector<query::CompetencyQuestion>& questions,
                       const std::optional<json>& provenance) {
  QualityReport report;
  report.findings = detect_deficiencies(schema, ref);
  report.coverage = cq_coverage(query::view_of(schema), questions);
  report.objectivity = objectivity_of(ref, provenance);
  return report;
}

}  // namespace

QualityReport make_report(const orm::OrmSchema& schema,
                          const ReferenceConceptualization& ref,
                          const std::vector<query::CompetencyQuestion>& questions,
                          const std::optional<json>& provenance) {
  return assemble(schema, ref, questions, provenance);
}

QualityReport make_report(const op::OpOntology& ontology,
                          const ReferenceConceptualization& ref,
                          const std::vector<query::CompetencyQuestion>& questions,
                          const std::optional<json>& provenance) {
  return assemble(ontology, ref, questions, provenance);
}

bool report_clean(const QualityReport& report) {
  if (!report.findings.empty()) return false;
  for (const auto& verdict : report.coverage)
    if (!verdict.answerable) return false;
  return true;
}

json diff_to_json(const DiffSummary& diff) {
  return {{"added_classes", diff.added_classes},
          {"removed_classes", diff.removed_classes},
          {"modified_classes", diff.modified_classes},
          {"added_tuple_classes", diff.added_tuple_classes},
          {"removed_tuple_classes", diff.removed_tuple_classes},
          {"modified_tuple_classes", diff.modified_tuple_classes},
          {"non_invasive", diff.non_invasive()}};
}

json report_to_json(const QualityReport& report) {
  json findings = json::array();
  for (const auto& finding : report.findings)
    findings.push_back({{"category", std::string(to_string(finding.category))},
                        {"subject", finding.subject},
                        {"details", finding.details}});
  json coverage = json::array();
  for (const auto& verdict : report.coverage)
    coverage.push_back({{"id", verdict.id},
                        {"answerable", verdict.answerable},
                        {"missing", verdict.missing}});
  return {{"findings", findings},
          {"coverage", coverage},
          {"extensibility",
           report.extensibility ? diff_to_json(*report.extensibility) : json()},
          {"objectivity",
           {{"objective", report.objectivity.objective},
            {"trace",
             report.objectivity.trace ? json(*report.objectivity.trace)
                                      : json()}}}};
}

std::string report_to_text(const QualityReport& report) {
  std::string text;
  if (report.findings.empty()) {
    text += "findings: none\n";
  } else {
    text += "findings:\n";
    for (const auto& finding : report.findings) {
      text += "  " + std::string(to_string(finding.category)) + ": " +
              finding.subject;
      if (!finding.details.empty()) {
        text += " (";
        for (std::size_t i = 0; i < finding.details.size(); ++i) {
          if (i) text += ", ";
          text += finding.details[i];
        }
        text += ")";
      }
      text += "\n";
    }
  }
  int yes = 0;
  for (const auto& verdict : report.coverage)
    if (verdict.answerable) ++yes;
  text += "coverage: " + std::to_string(yes) + "/" +
          std::to_string(report.coverage.size()) + " answerable\n";
  for (const auto& verdict : report.coverage) {
    if (verdict.answerable) continue;
    text += "  " + verdict.id + ": missing";
    for (const auto& item : verdict.missing) text += " [" + item + "]";
    text += "\n";
  }
  if (report.extensibility) {
    const DiffSummary& diff = *report.extensibility;
    text += "extensibility: +" +
            std::to_string(diff.added_classes.size() +
                           diff.added_tuple_classes.size()) +
            " -" +
            std::to_string(diff.removed_classes.size() +
                           diff.removed_tuple_classes.size()) +
            " ~" +
            std::to_string(diff.modified_classes.size() +
                           diff.modified_tuple_classes.size()) +
            (diff.non_invasive() ? " (non-invasive)" : " (invasive)") + "\n";
  }
  text += std::string("objectivity: ") +
          (report.objectivity.objective ? "derivation trace covers the mapping"
                                        : "no covering derivation trace") +
          "\n";
  return text;
}

}  // namespace perdura::quality
