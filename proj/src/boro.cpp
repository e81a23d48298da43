#include "perdura/boro.hpp"

namespace perdura::boro {

std::string_view to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::individual: return "Individual";
    case ObjectKind::object_class: return "Class";
    case ObjectKind::object_tuple: return "Tuple";
  }
  return "Individual";
}

BoroVerdict classify(const ConceptProbe& probe) {
  BoroVerdict verdict;
  verdict.concept_name = probe.concept_name;
  if (probe.has_extent == Answer::unknown)
    fail(Errc::insufficient_answers,
         "'" + probe.concept_name + "': no answer for \"" +
             std::string(kExtentQuestion) + "\"");
  if (probe.has_extent == Answer::yes) {
    verdict.kind = ObjectKind::individual;
    verdict.trace = {{std::string(kExtentQuestion), true}};
    return verdict;
  }
  verdict.trace = {{std::string(kExtentQuestion), false}};
  if (probe.instantiable == Answer::unknown)
    fail(Errc::insufficient_answers,
         "'" + probe.concept_name + "': no answer for \"" +
             std::string(kInstantiableQuestion) + "\"");
  if (probe.instantiable == Answer::yes) {
    verdict.kind = ObjectKind::object_class;
    verdict.trace.push_back({std::string(kInstantiableQuestion), true});
  } else {
    verdict.kind = ObjectKind::object_tuple;
    verdict.trace.push_back({std::string(kInstantiableQuestion), false});
  }
  return verdict;
}

WizardSession::WizardSession(std::string concept_name) {
  probe_.concept_name = std::move(concept_name);
}

bool WizardSession::complete() const {
  return probe_.has_extent == Answer::yes ||
         (probe_.has_extent == Answer::no && probe_.instantiable != Answer::unknown);
}

std::variant<Question, BoroVerdict> wizard_step(WizardSession& session,
                                                std::optional<bool> answer) {
  ConceptProbe& probe = session.probe_;
  if (session.complete()) {
    if (answer)
      fail(Errc::session_complete,
           "'" + probe.concept_name + "' already has a verdict");
    return classify(probe);
  }
  if (answer) {
    Answer value = *answer ? Answer::yes : Answer::no;
    if (probe.has_extent == Answer::unknown)
      probe.has_extent = value;
    else
      probe.instantiable = value;
    if (session.complete()) return classify(probe);
  }
  if (probe.has_extent == Answer::unknown)
    return Question{std::string(kExtentQuestion)};
  return Question{std::string(kInstantiableQuestion)};
}

ConceptProbe probe_from_answers(const std::string& name,
                                const nlohmann::json& answers) {
  ConceptProbe probe;
  probe.concept_name = name;
  if (!answers.is_object())
    fail(Errc::syntax_error, "answers document must be a JSON object");
  if (!answers.contains(name)) return probe;
  const auto& entry = answers.at(name);
  if (!entry.is_object())
    fail(Errc::syntax_error, "answers for '" + name + "' must be an object");
  if (entry.contains("extent") && !entry.at("extent").is_null()) {
    if (!entry.at("extent").is_boolean())
      fail(Errc::syntax_error, "'extent' for '" + name + "' must be a boolean");
    probe.has_extent = entry.at("extent").get<bool>() ? Answer::yes : Answer::no;
  }
  if (entry.contains("instantiable") && !entry.at("instantiable").is_null()) {
    if (!entry.at("instantiable").is_boolean())
      fail(Errc::syntax_error,
           "'instantiable' for '" + name + "' must be a boolean");
    probe.instantiable =
        entry.at("instantiable").get<bool>() ? Answer::yes : Answer::no;
  }
  return probe;
}

std::vector<BoroVerdict> classify_batch(const std::vector<std::string>& names,
                                        const nlohmann::json& answers) {
  std::vector<BoroVerdict> verdicts;
  verdicts.reserve(names.size());
  for (const auto& name : names)
    verdicts.push_back(classify(probe_from_answers(name, answers)));
  return verdicts;
}

nlohmann::json verdict_to_json(const BoroVerdict& verdict) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& step : verdict.trace)
    trace.push_back({{"question", step.question}, {"answer", step.answer}});
  return {{"concept", verdict.concept_name},
          {"kind", std::string(to_string(verdict.kind))},
          {"trace", trace}};
}

}  // namespace perdura::boro
