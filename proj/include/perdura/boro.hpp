#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "perdura/errors.hpp"

namespace perdura::boro {

enum class Answer { yes, no, unknown };
enum class ObjectKind { individual, object_class, object_tuple };

std::string_view to_string(ObjectKind kind);

// Wording is fixed so traces compare across runs.
inline constexpr std::string_view kExtentQuestion =
    "has spatio-temporal extension?";
inline constexpr std::string_view kInstantiableQuestion =
    "can it be instantiated?";

struct ConceptProbe {
  std::string concept_name;
  Answer has_extent = Answer::unknown;
  Answer instantiable = Answer::unknown;
};

struct TraceStep {
  std::string question;
  bool answer;

  bool operator==(const TraceStep&) const = default;
};

struct BoroVerdict {
  std::string concept_name;
  ObjectKind kind;
  std::vector<TraceStep> trace;
};

/// Decides individual/class/tuple from the two answers. Throws
/// InsufficientAnswers when a needed answer is unknown.
BoroVerdict classify(const ConceptProbe& probe);

struct Question {
  std::string text;
};

/// One interactive walk down the decision tree for a single concept.
class WizardSession {
 public:
  explicit WizardSession(std::string concept_name);

  const std::string& concept_name() const { return probe_.concept_name; }
  bool complete() const;

 private:
  friend std::variant<Question, BoroVerdict> wizard_step(
      WizardSession& session, std::optional<bool> answer);

  ConceptProbe probe_;
};

/// Without an answer: repeats the pending question (or the verdict once
/// complete). With an answer: consumes it for the pending question and
/// advances. Answering a completed session throws SessionComplete.
std::variant<Question, BoroVerdict> wizard_step(
    WizardSession& session, std::optional<bool> answer = std::nullopt);

/// Builds a probe for `name` from an answers document, a JSON map
/// name -> {extent: bool, instantiable: bool|null}. A missing entry leaves
/// both answers unknown so classify() reports it.
ConceptProbe probe_from_answers(const std::string& name,
                                const nlohmann::json& answers);

/// Verdicts for the named concepts in input order.
std::vector<BoroVerdict> classify_batch(const std::vector<std::string>& names,
                                        const nlohmann::json& answers);

nlohmann::json verdict_to_json(const BoroVerdict& verdict);

}  // namespace perdura::boro
