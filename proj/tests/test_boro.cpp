#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perdura/boro.hpp"

using namespace perdura;
using namespace perdura::boro;

namespace {

BoroVerdict replay(const BoroVerdict& verdict) {
  WizardSession session(verdict.concept_name);
  std::variant<Question, BoroVerdict> step = wizard_step(session);
  for (const auto& entry : verdict.trace) {
    REQUIRE(std::holds_alternative<Question>(step));
    REQUIRE(std::get<Question>(step).text == entry.question);
    step = wizard_step(session, entry.answer);
  }
  REQUIRE(std::holds_alternative<BoroVerdict>(step));
  return std::get<BoroVerdict>(step);
}

}  // namespace

TEST_CASE("the three leaf verdicts") {
  const auto individual = classify({"John Smith", Answer::yes, Answer::unknown});
  CHECK(individual.kind == ObjectKind::individual);
  REQUIRE(individual.trace.size() == 1);
  CHECK(individual.trace[0] == TraceStep{"has spatio-temporal extension?", true});

  const auto cls = classify({"People", Answer::no, Answer::yes});
  CHECK(cls.kind == ObjectKind::object_class);
  REQUIRE(cls.trace.size() == 2);
  CHECK(cls.trace[0] == TraceStep{"has spatio-temporal extension?", false});
  CHECK(cls.trace[1] == TraceStep{"can it be instantiated?", true});

  const auto tuple =
      classify({"is son of (Adam, John)", Answer::no, Answer::no});
  CHECK(tuple.kind == ObjectKind::object_tuple);
  REQUIRE(tuple.trace.size() == 2);
  CHECK(tuple.trace[1] == TraceStep{"can it be instantiated?", false});
}

TEST_CASE("every total answer assignment reaches exactly one kind") {
  int individuals = 0, classes = 0, tuples = 0;
  for (bool extent : {false, true}) {
    for (bool instantiable : {false, true}) {
      const auto verdict = classify({"concept", extent ? Answer::yes : Answer::no,
                                     instantiable ? Answer::yes : Answer::no});
      individuals += verdict.kind == ObjectKind::individual;
      classes += verdict.kind == ObjectKind::object_class;
      tuples += verdict.kind == ObjectKind::object_tuple;
      CHECK(verdict.trace.size() == (extent ? 1 : 2));
      // Determinism: a second run gives the identical verdict.
      const auto again = classify({"concept", extent ? Answer::yes : Answer::no,
                                   instantiable ? Answer::yes : Answer::no});
      CHECK(again.kind == verdict.kind);
      CHECK(again.trace == verdict.trace);
      // Replaying the trace through the wizard reproduces the verdict.
      const auto replayed = replay(verdict);
      CHECK(replayed.kind == verdict.kind);
      CHECK(replayed.trace == verdict.trace);
    }
  }
  CHECK(individuals == 2);  // instantiable is never asked
  CHECK(classes == 1);
  CHECK(tuples == 1);
}

TEST_CASE("missing answers are reported with the concept name") {
  CHECK_THROWS_AS(classify({"X", Answer::unknown, Answer::yes}), Error);
  CHECK_THROWS_AS(classify({"X", Answer::no, Answer::unknown}), Error);
  CHECK_NOTHROW(classify({"X", Answer::yes, Answer::unknown}));
  try {
    classify({"Authorship", Answer::no, Answer::unknown});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_answers);
    CHECK(std::string(e.what()).find("Authorship") != std::string::npos);
  }
}

TEST_CASE("the wizard pauses, repeats, and refuses late answers") {
  WizardSession session("Books");
  auto step = wizard_step(session);
  REQUIRE(std::holds_alternative<Question>(step));
  CHECK(std::get<Question>(step).text == "has spatio-temporal extension?");

  // Asking again without an answer repeats the question.
  step = wizard_step(session);
  CHECK(std::get<Question>(step).text == "has spatio-temporal extension?");
  CHECK_FALSE(session.complete());

  step = wizard_step(session, false);
  REQUIRE(std::holds_alternative<Question>(step));
  CHECK(std::get<Question>(step).text == "can it be instantiated?");

  step = wizard_step(session, true);
  REQUIRE(std::holds_alternative<BoroVerdict>(step));
  CHECK(std::get<BoroVerdict>(step).kind == ObjectKind::object_class);
  CHECK(std::get<BoroVerdict>(step).trace.size() == 2);
  CHECK(session.complete());

  // Reading the verdict again is fine; answering again is not.
  step = wizard_step(session);
  CHECK(std::holds_alternative<BoroVerdict>(step));
  CHECK_THROWS_AS(wizard_step(session, true), Error);
  try {
    wizard_step(session, true);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::session_complete);
  }

  WizardSession quick("John Smith");
  auto verdict = wizard_step(quick, true);
  REQUIRE(std::holds_alternative<BoroVerdict>(verdict));
  CHECK(std::get<BoroVerdict>(verdict).kind == ObjectKind::individual);
}

TEST_CASE("batch classification follows the answers file") {
  const nlohmann::json answers = nlohmann::json::parse(R"({
    "Books": {"extent": false, "instantiable": true},
    "myCopy": {"extent": true},
    "hasName": {"extent": false, "instantiable": false},
    "Authorship": {"extent": false, "instantiable": null}
  })");

  const auto verdicts = classify_batch({"Books", "myCopy", "hasName"}, answers);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0].concept_name == "Books");
  CHECK(verdicts[0].kind == ObjectKind::object_class);
  CHECK(verdicts[1].kind == ObjectKind::individual);
  CHECK(verdicts[2].kind == ObjectKind::object_tuple);

  CHECK(classify_batch({}, answers).empty());

  CHECK_THROWS_AS(classify_batch({"Authorship"}, answers), Error);
  CHECK_THROWS_AS(classify_batch({"NotListed"}, answers), Error);
  CHECK_THROWS_AS(classify_batch({"Books"}, nlohmann::json::array()), Error);

  const auto as_json = verdict_to_json(verdicts[0]);
  CHECK(as_json.at("concept") == "Books");
  CHECK(as_json.at("kind") == "Class");
  CHECK(as_json.at("trace").size() == 2);
  CHECK(as_json.at("trace")[0].at("answer") == false);
}
