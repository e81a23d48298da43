// Command-line front end: parse and verbalize flat schemas, classify
// concepts, re-engineer schemas into 4D ontologies, load instances, run
// queries, lint against a reference conceptualization, diff schema
// versions, and export triples. All stdout output is byte-deterministic;
// diagnostics go to stderr as one-line `error[CODE]: message` records.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "perdura/boro.hpp"
#include "perdura/errors.hpp"
#include "perdura/ontology_io.hpp"
#include "perdura/orm.hpp"
#include "perdura/quality.hpp"
#include "perdura/query.hpp"
#include "perdura/reengine.hpp"

using namespace perdura;
using nlohmann::json;

namespace {

// Exit statuses are part of the interface: 0 success, 1 validation or
// answerability failure, 2 usage error, 3 input parse error.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kParse = 3;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::usage:
      return kUsage;
    case Errc::syntax_error:
    case Errc::malformed_cq:
    case Errc::io:
      return kParse;
    default:
      return kFailure;
  }
}

bool color_enabled() {
  const char* value = std::getenv("PERDURA_COLOR");
  return value != nullptr && std::string_view(value) == "1";
}

void emit_error(std::string_view code_name, const std::string& message) {
  if (color_enabled())
    std::cerr << "\x1b[31merror[" << code_name << "]\x1b[0m: " << message
              << "\n";
  else
    std::cerr << "error[" << code_name << "]: " << message << "\n";
}

void emit_warning(const std::string& message) {
  if (color_enabled())
    std::cerr << "\x1b[33mwarning\x1b[0m: " << message << "\n";
  else
    std::cerr << "warning: " << message << "\n";
}

// stdout or -o file, same bytes either way.
void deliver(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    write_file(out_path, text);
}

json load_json(const std::string& path) {
  return parse_json(read_file(path), path);
}

// Both schema languages travel as JSON; the top-level keys identify which.
bool is_flat_schema(const json& doc) {
  if (!doc.is_object()) fail(Errc::schema_mismatch, "expected a JSON object");
  if (doc.contains("entities")) return true;
  if (doc.contains("classes")) return false;
  fail(Errc::schema_mismatch,
       "file holds neither a flat schema ('entities') nor an ontology "
       "('classes')");
}

int run_parse_orm(const std::string& in_path, const std::string& out_path) {
  const orm::OrmSchema schema = orm::parse_orm(read_file(in_path));
  deliver(canonical_json_text(orm::schema_to_json(schema)), out_path);
  return kOk;
}

int run_verbalize(const std::string& schema_path) {
  const orm::OrmSchema schema = orm::schema_from_json(load_json(schema_path));
  std::string text;
  for (const auto& sentence : orm::verbalize(schema)) text += sentence + "\n";
  deliver(text, "");
  return kOk;
}

int run_classify_batch(const std::string& answers_path,
                       const std::vector<std::string>& names) {
  const json answers = load_json(answers_path);
  std::string text;
  for (const auto& verdict : boro::classify_batch(names, answers))
    text += verdict.concept_name + ": " +
            std::string(boro::to_string(verdict.kind)) + "\n";
  deliver(text, "");
  return kOk;
}

int run_classify_interactive(const std::string& name) {
  boro::WizardSession session(name);
  while (true) {
    const auto step = boro::wizard_step(session);
    if (const auto* verdict = std::get_if<boro::BoroVerdict>(&step)) {
      std::cout << verdict->concept_name << ": "
                << boro::to_string(verdict->kind) << "\n";
      return kOk;
    }
    std::cout << std::get<boro::Question>(step).text << "\n";
    std::string line;
    if (!std::getline(std::cin, line))
      fail(Errc::usage, "input ended before the walk completed");
    if (line == "y" || line == "yes")
      boro::wizard_step(session, true);
    else if (line == "n" || line == "no")
      boro::wizard_step(session, false);
    else if (line != "?")
      fail(Errc::usage, "answer y, n, or ? (got '" + line + "')");
  }
}

int run_reengineer(const std::string& schema_path,
                   const std::string& script_path,
                   const std::string& out_path,
                   const std::string& provenance_path) {
  const orm::OrmSchema schema = orm::schema_from_json(load_json(schema_path));
  const json script = load_json(script_path);
  if (!script.is_object() || !script.contains("answers") ||
      !script.at("answers").is_string())
    fail(Errc::syntax_error, "script: 'answers' must name an answers file");
  const auto answers_path =
      std::filesystem::path(script_path).parent_path() /
      script.at("answers").get<std::string>();
  const json answers = load_json(answers_path.string());
  const auto result = reengine::reengineer(schema, script, answers);
  deliver(op::ontology_to_text(result.ontology), out_path);
  if (!provenance_path.empty())
    write_file(provenance_path, canonical_json_text(result.provenance));
  return kOk;
}

int run_load(const std::string& schema_path, const std::string& instances_path,
             const std::string& out_path) {
  op::OpOntology ontology = op::load_ontology(schema_path);
  op::load_instances(ontology, load_json(instances_path));
  deliver(op::ontology_to_text(ontology), out_path);
  return kOk;
}

std::string interval_text(const TimeInterval& interval) {
  return "[" + interval.start.to_string() + ", " +
         (interval.end ? interval.end->to_string() : "OPEN") + ")";
}

int run_query_count(const op::OpOntology& ontology, const std::string& root,
                    const std::string& relation, const std::string& part) {
  std::cout << query::count_parts(ontology, root, relation, part) << "\n";
  return kOk;
}

int run_query_related(const op::OpOntology& ontology,
                      const std::string& individual,
                      const std::string& tuple_class) {
  for (const auto& id : query::related(ontology, individual, tuple_class))
    std::cout << id << "\n";
  return kOk;
}

int run_query_value_at(const op::OpOntology& ontology,
                       const std::string& individual,
                       const std::string& tuple_class,
                       const std::string& instant) {
  const auto value = query::value_at(ontology, individual, tuple_class,
                                     TimeInstant::parse(instant));
  std::cout << (value ? *value : std::string("NONE")) << "\n";
  return kOk;
}

int run_query_history(const op::OpOntology& ontology,
                      const std::string& individual,
                      const std::string& tuple_class) {
  for (const auto& entry : query::history(ontology, individual, tuple_class))
    std::cout << interval_text(entry.interval) << " " << entry.value << "\n";
  return kOk;
}

int run_query_initiation(const op::OpOntology& ontology,
                         const std::string& individual,
                         const std::string& state_class) {
  const auto result =
      query::state_initiation(ontology, individual, state_class);
  for (const auto& note : result.notes) emit_warning(note);
  std::cout << (result.instant ? result.instant->to_string()
                               : std::string("NONE"))
            << "\n";
  return kOk;
}

int run_lint(const std::string& schema_path, const std::string& reference_path,
             const std::string& cqs_path, const std::string& provenance_path,
             bool as_text) {
  const auto ref = quality::reference_from_json(load_json(reference_path));
  std::vector<query::CompetencyQuestion> questions;
  if (!cqs_path.empty())
    questions = query::cqs_from_json(load_json(cqs_path));
  std::optional<json> provenance;
  if (!provenance_path.empty()) provenance = load_json(provenance_path);

  const json doc = load_json(schema_path);
  quality::QualityReport report;
  if (is_flat_schema(doc))
    report = quality::make_report(orm::schema_from_json(doc), ref, questions,
                                  provenance);
  else
    report = quality::make_report(op::ontology_from_json(doc), ref, questions,
                                  provenance);
  deliver(as_text ? quality::report_to_text(report)
                  : canonical_json_text(quality::report_to_json(report)),
          "");
  return quality::report_clean(report) ? kOk : kFailure;
}

int run_diff(const std::string& a_path, const std::string& b_path) {
  const json a = load_json(a_path);
  const json b = load_json(b_path);
  if (is_flat_schema(a) != is_flat_schema(b))
    fail(Errc::schema_mismatch,
         "cannot diff a flat schema against an ontology");
  const quality::DiffSummary diff =
      is_flat_schema(a)
          ? quality::extensibility_diff(orm::schema_from_json(a),
                                        orm::schema_from_json(b))
          : quality::extensibility_diff(op::ontology_from_json(a),
                                        op::ontology_from_json(b));
  deliver(canonical_json_text(quality::diff_to_json(diff)), "");
  return kOk;
}

int run_export_triples(const std::string& path) {
  deliver(op::export_triples(op::load_ontology(path)), "");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"4D ontology toolkit: model, re-engineer, query, and lint"};
  app.require_subcommand(1);

  std::string in_path, out_path, script_path, provenance_path;
  std::string reference_path, cqs_path, instances_path;
  std::string interactive_name, batch_answers;
  std::vector<std::string> batch_names;
  bool lint_text = false;

  auto* parse_cmd = app.add_subcommand("parse-orm", "Parse a flat schema file");
  parse_cmd->add_option("input", in_path, "schema source (.orm)")->required();
  parse_cmd->add_option("-o,--output", out_path, "write JSON here");

  auto* verbalize_cmd =
      app.add_subcommand("verbalize", "Render a schema as sentences");
  verbalize_cmd->add_option("schema", in_path, "schema JSON")->required();

  auto* classify_cmd =
      app.add_subcommand("classify", "Decide individual, class, or tuple");
  classify_cmd->add_option("--interactive", interactive_name,
                           "walk the questions for one concept");
  classify_cmd->add_option("--batch", batch_answers,
                           "answers JSON for the named concepts");
  classify_cmd->add_option("names", batch_names, "concepts to classify");

  auto* reengineer_cmd =
      app.add_subcommand("reengineer", "Apply a decision script to a schema");
  reengineer_cmd->add_option("schema", in_path, "schema JSON")->required();
  reengineer_cmd->add_option("--script", script_path, "decision script JSON")
      ->required();
  reengineer_cmd->add_option("-o,--output", out_path, "write ontology here");
  reengineer_cmd->add_option("--provenance", provenance_path,
                             "write the derivation trace here");

  auto* load_cmd =
      app.add_subcommand("load", "Populate an ontology with instances");
  load_cmd->add_option("schema", in_path, "ontology JSON")->required();
  load_cmd->add_option("instances", instances_path, "instance JSON")
      ->required();
  load_cmd->add_option("-o,--output", out_path, "write ontology here");

  auto* query_cmd = app.add_subcommand("query", "Ask a loaded ontology");
  query_cmd->add_option("ontology", in_path, "ontology JSON")->required();
  query_cmd->require_subcommand(1);
  std::string q_root, q_relation, q_part, q_individual, q_tuple_class;
  std::string q_instant, q_state_class;
  auto* count_cmd =
      query_cmd->add_subcommand("count", "Count parts via one relation step");
  count_cmd->add_option("root", q_root, "individual or class")->required();
  count_cmd->add_option("relation", q_relation, "tuple class")->required();
  count_cmd->add_option("part-class", q_part, "class of the parts")
      ->required();
  auto* related_cmd =
      query_cmd->add_subcommand("related", "Objects related to an individual");
  related_cmd->add_option("individual", q_individual)->required();
  related_cmd->add_option("tuple-class", q_tuple_class)->required();
  auto* value_cmd = query_cmd->add_subcommand(
      "value-at", "Value of a functional property at an instant");
  value_cmd->add_option("individual", q_individual)->required();
  value_cmd->add_option("tuple-class", q_tuple_class)->required();
  value_cmd->add_option("instant", q_instant, "YYYY-MM-DD")->required();
  auto* history_cmd = query_cmd->add_subcommand(
      "history", "Chronological value regimes of a property");
  history_cmd->add_option("individual", q_individual)->required();
  history_cmd->add_option("tuple-class", q_tuple_class)->required();
  auto* initiation_cmd = query_cmd->add_subcommand(
      "initiation", "Instant of the event starting the earliest state");
  initiation_cmd->add_option("individual", q_individual)->required();
  initiation_cmd->add_option("state-class", q_state_class)->required();

  auto* lint_cmd = app.add_subcommand(
      "lint", "Check a schema against a reference conceptualization");
  lint_cmd->add_option("schema", in_path, "schema JSON")->required();
  lint_cmd->add_option("--reference", reference_path, "reference JSON")
      ->required();
  lint_cmd->add_option("--cqs", cqs_path, "competency questions JSON");
  lint_cmd->add_option("--provenance", provenance_path,
                       "derivation trace JSON");
  lint_cmd->add_flag("--text", lint_text, "human-readable report");

  auto* diff_cmd =
      app.add_subcommand("diff", "Compare two versions of a schema");
  std::string diff_b;
  diff_cmd->add_option("before", in_path, "schema JSON")->required();
  diff_cmd->add_option("after", diff_b, "schema JSON")->required();

  auto* export_cmd =
      app.add_subcommand("export-triples", "Line-oriented triple dump");
  export_cmd->add_option("ontology", in_path, "ontology JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("USAGE", e.what());
    return kUsage;
  }

  try {
    if (app.got_subcommand(parse_cmd)) return run_parse_orm(in_path, out_path);
    if (app.got_subcommand(verbalize_cmd)) return run_verbalize(in_path);
    if (app.got_subcommand(classify_cmd)) {
      const bool interactive = !interactive_name.empty();
      const bool batch = !batch_answers.empty();
      if (interactive == batch)
        fail(Errc::usage, "choose exactly one of --interactive or --batch");
      if (interactive && !batch_names.empty())
        fail(Errc::usage, "--interactive takes no extra concept names");
      if (batch && batch_names.empty())
        fail(Errc::usage, "--batch needs at least one concept name");
      return interactive ? run_classify_interactive(interactive_name)
                         : run_classify_batch(batch_answers, batch_names);
    }
    if (app.got_subcommand(reengineer_cmd))
      return run_reengineer(in_path, script_path, out_path, provenance_path);
    if (app.got_subcommand(load_cmd))
      return run_load(in_path, instances_path, out_path);
    if (app.got_subcommand(query_cmd)) {
      const op::OpOntology ontology = op::load_ontology(in_path);
      if (query_cmd->got_subcommand(count_cmd))
        return run_query_count(ontology, q_root, q_relation, q_part);
      if (query_cmd->got_subcommand(related_cmd))
        return run_query_related(ontology, q_individual, q_tuple_class);
      if (query_cmd->got_subcommand(value_cmd))
        return run_query_value_at(ontology, q_individual, q_tuple_class,
                                  q_instant);
      if (query_cmd->got_subcommand(history_cmd))
        return run_query_history(ontology, q_individual, q_tuple_class);
      if (query_cmd->got_subcommand(initiation_cmd))
        return run_query_initiation(ontology, q_individual, q_state_class);
    }
    if (app.got_subcommand(lint_cmd))
      return run_lint(in_path, reference_path, cqs_path, provenance_path,
                      lint_text);
    if (app.got_subcommand(diff_cmd)) return run_diff(in_path, diff_b);
    if (app.got_subcommand(export_cmd)) return run_export_triples(in_path);
    fail(Errc::usage, "no command given");
  } catch (const Error& e) {
    emit_error(e.code_name(), e.what());
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    emit_error("SYNTAX_ERROR", e.what());
    return kParse;
  } catch (const std::exception& e) {
    emit_error("IO", e.what());
    return kFailure;
  }
}
