#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perdura/ontology_io.hpp"

using namespace perdura;
using namespace perdura::op;

namespace {

TimeInstant at(const char* iso) { return TimeInstant::parse(iso); }

TimeInterval span(const char* from, const char* to) { return {at(from), at(to)}; }

/// A small store exercising every serialized feature: subtypes, edges,
/// role tags, states, events, bindings, validity intervals.
OpOntology sample_store() {
  OpOntology ont;
  ont.add_class({.name = "Products"});
  ont.add_class({.name = "BookCopies", .superclasses = {"Products"}});
  ClassDescription states;
  states.name = "BookCopyStates";
  states.role_tag = RoleTag::state_class;
  ont.add_class(states);
  ClassDescription events;
  events.name = "PriceAssignments";
  events.role_tag = RoleTag::event_class;
  ont.add_class(events);
  ClassDescription prices;
  prices.name = "Prices";
  prices.role_tag = RoleTag::value_class;
  ont.add_class(prices);
  ont.add_class({.name = "TimeInstants"});

  ont.ensure_builtin(kHasTemporalPart);
  ont.add_edge("BookCopies",
               {.via = "hasTemporalPart", .to = "BookCopyStates", .sequenced = false});
  TupleClassDescription priced;
  priced.name = "pricedAt";
  priced.domain = "BookCopyStates";
  priced.range = "Prices";
  priced.functional_in_time = true;
  ont.add_tuple_class(priced);

  IndividualDescription copy;
  copy.name = "myCopy";
  copy.extent = Extent({"c1"}, {TimeInterval::open_ended(at("2005-12-20"))});
  copy.classes = {"BookCopies"};
  ont.add_individual(copy);

  IndividualDescription s1;
  s1.name = "s1";
  s1.kind = Kind::state;
  s1.whole = "myCopy";
  s1.extent = Extent({"c1"}, {span("2005-12-20", "2009-02-20")});
  s1.classes = {"BookCopyStates"};
  ont.add_individual(s1);
  IndividualDescription s2;
  s2.name = "s2";
  s2.kind = Kind::state;
  s2.whole = "myCopy";
  s2.extent = Extent({"c1"}, {TimeInterval::open_ended(at("2009-02-20"))});
  s2.classes = {"BookCopyStates"};
  ont.add_individual(s2);

  IndividualDescription p50;
  p50.name = "p50";
  p50.extent = Extent({"v:p50"}, {});
  p50.classes = {"Prices"};
  ont.add_individual(p50);

  IndividualDescription ev1;
  ev1.name = "ev1";
  ev1.kind = Kind::event;
  ev1.instant = at("2005-12-20");
  ev1.classes = {"PriceAssignments"};
  ont.add_individual(ev1);

  ont.add_tuple({"hasTemporalPart", "myCopy", "s1", std::nullopt});
  ont.add_tuple({"hasTemporalPart", "myCopy", "s2", std::nullopt});
  ont.add_tuple({"pricedAt", "s1", "p50", std::nullopt});
  ont.bind_event("ev1", "s1", std::nullopt);
  ont.validate();
  return ont;
}

}  // namespace

TEST_CASE("interval and extent serialization round-trips") {
  for (const TimeInterval& iv :
       {span("2005-12-20", "2009-02-20"), TimeInterval::open_ended(at("2009-02-20")),
        TimeInterval::at_instant(at("2001-05-01"))}) {
    CHECK(interval_from_json(interval_to_json(iv)) == iv);
  }
  const Extent e({"a", "b"}, {span("2000-01-01", "2001-01-01"),
                              TimeInterval::at_instant(at("2010-06-01"))});
  CHECK(extent_from_json(extent_to_json(e)) == e);
  CHECK(extent_from_json(nlohmann::json::object()) == Extent{});

  CHECK_THROWS_AS(interval_from_json(nlohmann::json::array({"2000-01-01"})), Error);
  CHECK_THROWS_AS(interval_from_json(nlohmann::json{"2000-01-01", 5}), Error);
}

TEST_CASE("ontology documents survive a save and load byte-for-byte") {
  const OpOntology original = sample_store();
  const std::string text = ontology_to_text(original);
  const OpOntology reloaded = ontology_from_json(parse_json(text, "roundtrip"));
  CHECK(ontology_to_text(reloaded) == text);

  // Determinism: serializing twice yields identical bytes.
  CHECK(ontology_to_text(original) == text);

  // The reloaded store answers like the original.
  CHECK(reloaded.classes().size() == original.classes().size());
  CHECK(reloaded.tuples().size() == original.tuples().size());
  CHECK(reloaded.is_member("myCopy", "Products"));
  CHECK(reloaded.individual("ev1").instant == at("2005-12-20"));
  CHECK(reloaded.cls("BookCopies").edges.size() == 1);
  CHECK(reloaded.tuple_cls("pricedAt").functional_in_time);
  CHECK(reloaded.individual("s2").extent.temporal().front().is_open());
}

TEST_CASE("documents reject malformed shapes") {
  CHECK_THROWS_AS(parse_json("{not json", "x"), Error);
  try {
    parse_json("{not json", "x");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::syntax_error);
  }
  CHECK_THROWS_AS(ontology_from_json(nlohmann::json::array()), Error);
  CHECK_THROWS_AS(ontology_from_json(nlohmann::json{{"classes", 3}}), Error);
  CHECK_THROWS_AS(
      ontology_from_json(nlohmann::json{{"classes", {{{"name", "NoId"}}}}}), Error);
  // Dangling member id.
  nlohmann::json doc = {{"classes", {{{"id", "C"},
                                      {"name", "C"},
                                      {"members", {"ghost"}}}}}};
  CHECK_THROWS_AS(ontology_from_json(doc), Error);
}

TEST_CASE("instance documents merge into a schema") {
  OpOntology ont;
  ont.add_class({.name = "Books"});
  ont.add_class({.name = "BookEditions"});
  ont.add_class({.name = "TimeInstants"});
  ont.ensure_builtin(kIsComposedOf);
  ont.add_edge("Books", {.via = "isComposedOf", .to = "BookEditions", .sequenced = true});

  const nlohmann::json doc = nlohmann::json::parse(R"({
    "individuals": [
      {"name": "book1", "id": "book1",
       "extent": {"spatial": ["b"], "temporal": [["1999-03-01", null]]},
       "classes": ["Books"]},
      {"name": "e1", "id": "e1",
       "extent": {"spatial": ["b"], "temporal": [["1999-03-01", "2004-09-01"]]},
       "classes": ["BookEditions"]},
      {"name": "e2", "id": "e2",
       "extent": {"spatial": ["b"], "temporal": [["2004-09-01", null]]},
       "classes": ["BookEditions"]},
      {"name": "ev", "id": "ev", "kind": "event", "instant": "1999-03-01"}
    ],
    "tuples": [
      {"tuple_class": "isComposedOf", "subject": "book1", "object": "e1"},
      {"tuple_class": "isComposedOf", "subject": "book1", "object": "e2"}
    ],
    "bindings": [
      {"event": "ev"}
    ]
  })");
  load_instances(ont, doc);
  CHECK(ont.is_member("e1", "BookEditions"));
  CHECK(ont.has_individual("t:1999-03-01"));
  CHECK(ont.is_member("t:1999-03-01", "TimeInstants"));
  CHECK(ont.tuples().size() == 3);

  SUBCASE("unknown membership class") {
    nlohmann::json bad = {{"individuals",
                           {{{"name", "x"}, {"classes", {"Nowhere"}}}}}};
    CHECK_THROWS_AS(load_instances(ont, bad), Error);
    try {
      load_instances(ont, bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::schema_mismatch);
    }
  }
  SUBCASE("unknown tuple class") {
    nlohmann::json bad = {{"tuples", {{{"tuple_class", "nope"},
                                      {"subject", "book1"},
                                      {"object", "e1"}}}}};
    CHECK_THROWS_AS(load_instances(ont, bad), Error);
  }
  SUBCASE("sequenced edge violation is caught at load") {
    nlohmann::json bad = nlohmann::json::parse(R"({
      "individuals": [
        {"name": "e3", "id": "e3",
         "extent": {"spatial": ["b"], "temporal": [["2004-09-01", "2005-01-01"]]},
         "classes": ["BookEditions"]}
      ],
      "tuples": [
        {"tuple_class": "isComposedOf", "subject": "book1", "object": "e3"}
      ]
    })");
    CHECK_THROWS_AS(load_instances(ont, bad), Error);
  }
}

TEST_CASE("triple export is line-oriented and sorted") {
  OpOntology ont;
  ont.add_class({.name = "Prices"});
  TupleClassDescription priced;
  priced.name = "pricedAt";
  priced.id = "pricedAt";
  ont.add_tuple_class(priced);
  IndividualDescription copy;
  copy.name = "myCopy";
  copy.extent = Extent({"c"}, {TimeInterval::open_ended(at("2005-12-20"))});
  ont.add_individual(copy);
  for (const char* p : {"p50", "p25"}) {
    IndividualDescription d;
    d.name = p;
    d.extent = Extent({std::string("v:") + p}, {});
    d.classes = {"Prices"};
    ont.add_individual(d);
  }
  ont.add_tuple({"pricedAt", "myCopy", "p50", span("2005-12-20", "2009-02-20")});
  ont.add_tuple({"pricedAt", "myCopy", "p25",
                 TimeInterval::open_ended(at("2009-02-20"))});

  const std::string text = export_triples(ont);
  CHECK(text ==
        "myCopy pricedAt p25 2009-02-20 open\n"
        "myCopy pricedAt p50 2005-12-20 2009-02-20\n");

  OpOntology empty;
  CHECK(export_triples(empty).empty());
}
