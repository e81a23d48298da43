#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perdura/ontology.hpp"
#include "perdura/orm.hpp"
#include "perdura/query.hpp"

namespace perdura::quality {

/// The domain concepts a schema is supposed to capture, plus where each one
/// is represented. Concepts keep declaration order: when several concepts
/// share one element, the first declared concept counts as the element's
/// owner and the later ones are left unrepresented.
struct ReferenceConceptualization {
  std::vector<std::string> concepts;  // unique, declaration order
  std::map<std::string, std::vector<std::string>> mapping;  // concept -> element ids
};

/// Parses {"concepts": [...], "mapping": {concept: [element ids]}}.
/// Duplicate concept names are rejected; a concept absent from the mapping
/// simply maps to nothing.
ReferenceConceptualization reference_from_json(const nlohmann::json& doc);

enum class Deficiency { overload, redundancy, excess, deficit };

std::string_view to_string(Deficiency category);

/// One detector hit. `subject` is a schema element for overload/excess and a
/// concept for redundancy/deficit; `details` lists the counterparts, sorted.
struct QualityFinding {
  Deficiency category = Deficiency::overload;
  std::string subject;
  std::vector<std::string> details;

  bool operator==(const QualityFinding&) const = default;
};

/// Object-level schema elements a reference may map onto: entity types of a
/// flat schema, classes of a rich one. Relationship constructs are not
/// mapping targets.
std::vector<std::string> object_elements(const orm::OrmSchema& schema);
std::vector<std::string> object_elements(const op::OpOntology& ontology);

/// Core detector over an explicit element universe. Categories, in output
/// order: overload (element owned by >= 2 concepts), redundancy (concept
/// spread over >= 2 elements), excess (element no concept maps to), deficit
/// (concept owning no element of its own). Subjects sorted per category.
/// Throws DanglingMapping when the mapping names an undeclared concept or an
/// element outside the universe.
std::vector<QualityFinding> detect_deficiencies(
    const std::vector<std::string>& elements,
    const ReferenceConceptualization& ref);
std::vector<QualityFinding> detect_deficiencies(
    const orm::OrmSchema& schema, const ReferenceConceptualization& ref);
std::vector<QualityFinding> detect_deficiencies(
    const op::OpOntology& ontology, const ReferenceConceptualization& ref);

/// Verdict for one competency question against one schema.
struct CqVerdict {
  std::string id;
  bool answerable = false;
  std::vector<std::string> missing;

  bool operator==(const CqVerdict&) const = default;
};

std::vector<CqVerdict> cq_coverage(
    const query::SchemaView& view,
    const std::vector<query::CompetencyQuestion>& questions);

/// Schema delta between two versions of a model. Flat schemas count entity
/// types in the class buckets and fact types in the tuple-class buckets.
/// Membership (instance) data never influences the diff.
struct DiffSummary {
  std::vector<std::string> added_classes;
  std::vector<std::string> removed_classes;
  std::vector<std::string> modified_classes;
  std::vector<std::string> added_tuple_classes;
  std::vector<std::string> removed_tuple_classes;
  std::vector<std::string> modified_tuple_classes;

  /// An extension is non-invasive when it only adds: nothing existing was
  /// removed or redefined.
  bool non_invasive() const {
    return removed_classes.empty() && modified_classes.empty() &&
           removed_tuple_classes.empty() && modified_tuple_classes.empty();
  }

  bool operator==(const DiffSummary&) const = default;
};

DiffSummary extensibility_diff(const op::OpOntology& before,
                               const op::OpOntology& after);
DiffSummary extensibility_diff(const orm::OrmSchema& before,
                               const orm::OrmSchema& after);

/// Whether the model's concept choices are backed by a recorded derivation.
struct Objectivity {
  bool objective = false;
  std::optional<std::string> trace;  // the answers reference from the trace

  bool operator==(const Objectivity&) const = default;
};

struct QualityReport {
  std::vector<QualityFinding> findings;
  std::vector<CqVerdict> coverage;
  std::optional<DiffSummary> extensibility;
  Objectivity objectivity;

  bool operator==(const QualityReport&) const = default;
};

/// Assembles findings, coverage, and objectivity. Objectivity holds iff a
/// provenance trace is supplied and its element table covers every element
/// the reference maps a concept onto.
QualityReport make_report(const orm::OrmSchema& schema,
                          const ReferenceConceptualization& ref,
                          const std::vector<query::CompetencyQuestion>& questions,
                          const std::optional<nlohmann::json>& provenance);
QualityReport make_report(const op::OpOntology& ontology,
                          const ReferenceConceptualization& ref,
                          const std::vector<query::CompetencyQuestion>& questions,
                          const std::optional<nlohmann::json>& provenance);

/// True when there are no findings and every question is answerable; drives
/// the lint exit status.
bool report_clean(const QualityReport& report);

nlohmann::json diff_to_json(const DiffSummary& diff);
nlohmann::json report_to_json(const QualityReport& report);
std::string report_to_text(const QualityReport& report);

}  // namespace perdura::quality
