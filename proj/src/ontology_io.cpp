#include "perdura/ontology_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace perdura {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(Errc::io, "cannot read '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) fail(Errc::io, "cannot write '" + path + "'");
}

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::syntax_error, origin + ": " + e.what());
  }
}

std::string canonical_json_text(const nlohmann::json& value) {
  return value.dump(2) + "\n";
}

namespace op {

namespace {

[[noreturn]] void shape_error(const std::string& where, const std::string& what) {
  fail(Errc::syntax_error, where + ": " + what);
}

const nlohmann::json& need(const nlohmann::json& obj, const char* key,
                           const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    shape_error(where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

std::string need_string(const nlohmann::json& obj, const char* key,
                        const std::string& where) {
  const auto& v = need(obj, key, where);
  if (!v.is_string()) shape_error(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj,
                                           const char* key,
                                           const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const auto& v = obj.at(key);
  if (!v.is_string())
    shape_error(where, std::string("'") + key + "' must be a string or null");
  return v.get<std::string>();
}

bool optional_bool(const nlohmann::json& obj, const char* key, bool fallback,
                   const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean())
    shape_error(where, std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

nlohmann::json interval_to_json(const TimeInterval& interval) {
  nlohmann::json out = nlohmann::json::array();
  out.push_back(interval.start.to_string());
  if (interval.end)
    out.push_back(interval.end->to_string());
  else
    out.push_back(nullptr);
  return out;
}

TimeInterval interval_from_json(const nlohmann::json& value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_string() ||
      !(value[1].is_string() || value[1].is_null()))
    shape_error("interval", "expected [start, end|null]");
  const TimeInstant start = TimeInstant::parse(value[0].get<std::string>());
  if (value[1].is_null()) return TimeInterval::open_ended(start);
  return {start, TimeInstant::parse(value[1].get<std::string>())};
}

nlohmann::json extent_to_json(const Extent& extent) {
  nlohmann::json spatial = nlohmann::json::array();
  for (const auto& token : extent.spatial()) spatial.push_back(token);
  nlohmann::json temporal = nlohmann::json::array();
  for (const auto& interval : extent.temporal())
    temporal.push_back(interval_to_json(interval));
  return {{"spatial", spatial}, {"temporal", temporal}};
}

Extent extent_from_json(const nlohmann::json& value) {
  if (!value.is_object()) shape_error("extent", "expected an object");
  Extent out;
  if (value.contains("spatial")) {
    const auto& spatial = value.at("spatial");
    if (!spatial.is_array()) shape_error("extent", "'spatial' must be an array");
    for (const auto& token : spatial) {
      if (!token.is_string()) shape_error("extent", "spatial tokens must be strings");
      out.add_spatial(token.get<std::string>());
    }
  }
  if (value.contains("temporal")) {
    const auto& temporal = value.at("temporal");
    if (!temporal.is_array()) shape_error("extent", "'temporal' must be an array");
    for (const auto& interval : temporal)
      out.add_interval(interval_from_json(interval));
  }
  return out;
}

nlohmann::json ontology_to_json(const OpOntology& ontology) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& [id, c] : ontology.classes()) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : c.members) members.push_back(m);
    nlohmann::json superclasses = nlohmann::json::array();
    for (const auto& s : c.superclasses) superclasses.push_back(s);
    auto edges_sorted = c.edges;
    std::sort(edges_sorted.begin(), edges_sorted.end());
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : edges_sorted)
      edges.push_back({{"via", e.via}, {"to", e.to}, {"sequenced", e.sequenced}});
    classes.push_back({{"id", c.id},
                       {"name", c.name},
                       {"role_tag", std::string(to_string(c.role_tag))},
                       {"superclasses", superclasses},
                       {"edges", edges},
                       {"members", members}});
  }

  nlohmann::json tuple_classes = nlohmann::json::array();
  for (const auto& [id, tc] : ontology.tuple_classes()) {
    nlohmann::json row = {{"id", tc.id},
                          {"name", tc.name},
                          {"functional_in_time", tc.functional_in_time}};
    row["domain"] = tc.domain ? nlohmann::json(*tc.domain) : nlohmann::json();
    row["range"] = tc.range ? nlohmann::json(*tc.range) : nlohmann::json();
    tuple_classes.push_back(std::move(row));
  }

  nlohmann::json individuals = nlohmann::json::array();
  for (const auto& [id, ind] : ontology.individuals()) {
    nlohmann::json row = {{"id", ind.id},
                          {"name", ind.name},
                          {"kind", std::string(to_string(ind.kind))},
                          {"extent", extent_to_json(ind.extent)}};
    row["whole"] = ind.whole ? nlohmann::json(*ind.whole) : nlohmann::json();
    row["instant"] =
        ind.instant ? nlohmann::json(ind.instant->to_string()) : nlohmann::json();
    individuals.push_back(std::move(row));
  }

  auto tuple_key = [](const nlohmann::json& row) {
    std::string key = row.at("tuple_class").get<std::string>() + '\0' +
                      row.at("subject").get<std::string>() + '\0' +
                      row.at("object").get<std::string>() + '\0';
    if (!row.at("valid").is_null()) key += row.at("valid").dump();
    return key;
  };
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& t : ontology.tuples()) {
    nlohmann::json row = {{"tuple_class", t.tuple_class},
                          {"subject", t.subject},
                          {"object", t.object}};
    row["valid"] = t.valid ? interval_to_json(*t.valid) : nlohmann::json();
    tuples.push_back(std::move(row));
  }
  std::sort(tuples.begin(), tuples.end(),
            [&](const nlohmann::json& a, const nlohmann::json& b) {
              return tuple_key(a) < tuple_key(b);
            });

  return {{"classes", classes},
          {"tuple_classes", tuple_classes},
          {"individuals", individuals},
          {"tuples", tuples}};
}

std::string ontology_to_text(const OpOntology& ontology) {
  return canonical_json_text(ontology_to_json(ontology));
}

OpOntology ontology_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) shape_error("document", "expected a JSON object");
  auto array_of = [&](const char* key) -> nlohmann::json {
    if (!doc.contains(key)) return nlohmann::json::array();
    const auto& v = doc.at(key);
    if (!v.is_array())
      shape_error("document", std::string("'") + key + "' must be an array");
    return v;
  };

  OpOntology ontology;
  const auto classes = array_of("classes");
  for (const auto& row : classes) {
    ClassDescription d;
    d.id = need_string(row, "id", "class");
    d.name = need_string(row, "name", "class");
    if (row.contains("role_tag") && !row.at("role_tag").is_null())
      d.role_tag = role_tag_from_string(need_string(row, "role_tag", "class"));
    ontology.add_class(d);
  }
  for (const auto& row : array_of("tuple_classes")) {
    TupleClassDescription d;
    d.id = need_string(row, "id", "tuple class");
    d.name = need_string(row, "name", "tuple class");
    d.domain = optional_string(row, "domain", "tuple class");
    d.range = optional_string(row, "range", "tuple class");
    d.functional_in_time =
        optional_bool(row, "functional_in_time", false, "tuple class");
    ontology.add_tuple_class(d);
  }

  for (const auto& row : classes) {
    const std::string id = need_string(row, "id", "class");
    if (row.contains("superclasses")) {
      for (const auto& s : row.at("superclasses")) {
        if (!s.is_string()) shape_error("class " + id, "superclass ids must be strings");
        ontology.add_superclass(id, s.get<std::string>());
      }
    }
    if (row.contains("edges")) {
      for (const auto& e : row.at("edges")) {
        SchemaEdge edge;
        edge.via = need_string(e, "via", "edge of " + id);
        edge.to = need_string(e, "to", "edge of " + id);
        edge.sequenced = optional_bool(e, "sequenced", false, "edge of " + id);
        ontology.add_edge(id, edge);
      }
    }
  }

  for (const auto& row : array_of("individuals")) {
    IndividualDescription d;
    d.id = need_string(row, "id", "individual");
    d.name = need_string(row, "name", "individual");
    if (row.contains("kind") && !row.at("kind").is_null())
      d.kind = kind_from_string(need_string(row, "kind", "individual"));
    if (row.contains("extent") && !row.at("extent").is_null())
      d.extent = extent_from_json(row.at("extent"));
    d.whole = optional_string(row, "whole", "individual");
    if (const auto instant = optional_string(row, "instant", "individual"))
      d.instant = TimeInstant::parse(*instant);
    ontology.add_individual(d);
  }

  for (const auto& row : classes) {
    const std::string id = need_string(row, "id", "class");
    if (!row.contains("members")) continue;
    for (const auto& m : row.at("members")) {
      if (!m.is_string()) shape_error("class " + id, "member ids must be strings");
      ontology.add_member(id, m.get<std::string>());
    }
  }

  for (const auto& row : array_of("tuples")) {
    OpTuple t;
    t.tuple_class = need_string(row, "tuple_class", "tuple");
    t.subject = need_string(row, "subject", "tuple");
    t.object = need_string(row, "object", "tuple");
    if (row.contains("valid") && !row.at("valid").is_null())
      t.valid = interval_from_json(row.at("valid"));
    ontology.add_tuple(t);
  }

  ontology.validate();
  return ontology;
}

OpOntology load_ontology(const std::string& path) {
  return ontology_from_json(parse_json(read_file(path), path));
}

void save_ontology(const OpOntology& ontology, const std::string& path) {
  write_file(path, ontology_to_text(ontology));
}

void load_instances(OpOntology& ontology, const nlohmann::json& doc) {
  if (!doc.is_object()) shape_error("instance document", "expected a JSON object");
  auto array_of = [&](const char* key) -> nlohmann::json {
    if (!doc.contains(key)) return nlohmann::json::array();
    const auto& v = doc.at(key);
    if (!v.is_array())
      shape_error("instance document", std::string("'") + key + "' must be an array");
    return v;
  };

  for (const auto& row : array_of("individuals")) {
    IndividualDescription d;
    d.name = need_string(row, "name", "individual");
    d.id = optional_string(row, "id", "individual");
    if (row.contains("kind") && !row.at("kind").is_null())
      d.kind = kind_from_string(need_string(row, "kind", "individual"));
    if (row.contains("extent") && !row.at("extent").is_null())
      d.extent = extent_from_json(row.at("extent"));
    d.whole = optional_string(row, "whole", "individual");
    if (const auto instant = optional_string(row, "instant", "individual"))
      d.instant = TimeInstant::parse(*instant);
    if (row.contains("classes")) {
      for (const auto& c : row.at("classes")) {
        if (!c.is_string())
          shape_error("individual " + d.name, "class refs must be strings");
        const OpClass* found = ontology.find_class(c.get<std::string>());
        if (!found)
          fail(Errc::schema_mismatch, "individual '" + d.name +
                                          "' names unknown class '" +
                                          c.get<std::string>() + "'");
        d.classes.insert(found->id);
      }
    }
    ontology.add_individual(d);
  }

  for (const auto& row : array_of("tuples")) {
    OpTuple t;
    const std::string ref = need_string(row, "tuple_class", "tuple");
    const TupleClass* tc = ontology.find_tuple_class(ref);
    if (!tc)
      fail(Errc::schema_mismatch, "tuple names unknown tuple class '" + ref + "'");
    t.tuple_class = tc->id;
    t.subject = need_string(row, "subject", "tuple");
    t.object = need_string(row, "object", "tuple");
    if (row.contains("valid") && !row.at("valid").is_null())
      t.valid = interval_from_json(row.at("valid"));
    ontology.add_tuple(t);
  }

  for (const auto& row : array_of("bindings")) {
    const std::string event = need_string(row, "event", "binding");
    ontology.bind_event(event, optional_string(row, "initiates", "binding"),
                        optional_string(row, "dissolves", "binding"));
  }

  ontology.validate();
}

std::string export_triples(const OpOntology& ontology) {
  std::vector<std::string> lines;
  for (const auto& t : ontology.tuples()) {
    std::string line = t.subject + ' ' + ontology.tuple_cls(t.tuple_class).name +
                       ' ' + t.object;
    if (t.valid) {
      line += ' ' + t.valid->start.to_string() + ' ' +
              (t.valid->end ? t.valid->end->to_string() : std::string("open"));
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace op
}  // namespace perdura
