#include "perdura/orm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace perdura::orm {

namespace {

constexpr std::string_view kSubtypeRole = "Is_A";

struct Token {
  std::string text;
  int col = 0;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

[[noreturn]] void syntax(int line, int col, const std::string& what) {
  fail(Errc::syntax_error,
       "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what);
}

/// Subtype edges must be acyclic; walks from every node.
void check_subtype_cycles(const OrmSchema& schema) {
  std::map<std::string, std::vector<std::string>> up;
  for (const auto& edge : schema.subtypes) up[edge.sub].push_back(edge.super);
  for (const auto& [start, _] : up) {
    std::vector<std::string> stack{start};
    std::set<std::string> seen;
    while (!stack.empty()) {
      const std::string current = stack.back();
      stack.pop_back();
      if (current == start && !seen.empty())
        fail(Errc::cyclic_subtype, "subtype cycle through '" + start + "'");
      if (!seen.insert(current).second) continue;
      auto it = up.find(current);
      if (it == up.end()) continue;
      for (const auto& super : it->second) stack.push_back(super);
    }
  }
}

std::string lowercase_first(std::string word) {
  if (!word.empty())
    word[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
  return word;
}

std::string target_text(const ConstraintTarget& t) {
  std::string out = t.subject + "." + t.role + "." + t.object;
  if (t.position == 2) out += "@2";
  return out;
}

}  // namespace

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::uniqueness: return "uniqueness";
    case ConstraintKind::mandatory: return "mandatory";
    case ConstraintKind::asymmetry: return "asymmetry";
    case ConstraintKind::intransitivity: return "intransitivity";
    case ConstraintKind::cardinality: return "cardinality";
  }
  return "uniqueness";
}

ConstraintKind constraint_kind_from_string(std::string_view text) {
  if (text == "uniqueness") return ConstraintKind::uniqueness;
  if (text == "mandatory") return ConstraintKind::mandatory;
  if (text == "asymmetry") return ConstraintKind::asymmetry;
  if (text == "intransitivity") return ConstraintKind::intransitivity;
  if (text == "cardinality") return ConstraintKind::cardinality;
  fail(Errc::syntax_error, "unknown constraint kind '" + std::string(text) + "'");
}

const EntityType* OrmSchema::find_entity(const std::string& name) const {
  for (const auto& entity : entities)
    if (entity.name == name) return &entity;
  return nullptr;
}

const FactType* OrmSchema::find_fact(const ConstraintTarget& target) const {
  for (const auto& fact : facts) {
    if (fact.subject == target.subject && fact.role == target.role &&
        fact.object == target.object)
      return &fact;
  }
  return nullptr;
}

OrmSchema parse_orm(const std::string& text) {
  struct PendingFact {
    Token subject, role, object;
    int line;
  };
  struct PendingIdentifier {
    Token entity, by;
    int line;
  };

  OrmSchema schema;
  std::vector<PendingFact> pending_facts;
  std::vector<PendingIdentifier> pending_identifiers;

  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const Token& head = tokens[0];

    if (head.text == "entity") {
      if (tokens.size() != 3)
        syntax(line_no, head.col, "expected: entity <Name> lexical|nonlexical");
      const Token& name = tokens[1];
      const Token& mode = tokens[2];
      if (mode.text != "lexical" && mode.text != "nonlexical")
        syntax(line_no, mode.col, "expected 'lexical' or 'nonlexical'");
      for (const auto& existing : schema.entities) {
        if (existing.name == name.text)
          fail(Errc::duplicate_entity, "line " + std::to_string(line_no) +
                                           ", col " + std::to_string(name.col) +
                                           ": entity '" + name.text +
                                           "' declared twice");
      }
      schema.entities.push_back({name.text, mode.text == "lexical", std::nullopt});
    } else if (head.text == "fact") {
      if (tokens.size() != 4)
        syntax(line_no, head.col, "expected: fact <Subject> <Role> <Object>");
      if (tokens[2].text.empty()) syntax(line_no, tokens[2].col, "empty role label");
      if (tokens[2].text == tokens[1].text)
        syntax(line_no, tokens[2].col, "role label must differ from the subject");
      pending_facts.push_back({tokens[1], tokens[2], tokens[3], line_no});
    } else if (head.text == "identifier") {
      if (tokens.size() != 4 || tokens[2].text != "by")
        syntax(line_no, head.col, "expected: identifier <Entity> by <LexicalEntity>");
      pending_identifiers.push_back({tokens[1], tokens[3], line_no});
    } else if (head.text == "constraint") {
      if (tokens.size() != 3 && tokens.size() != 4)
        syntax(line_no, head.col,
               "expected: constraint <kind> <Subject>.<Role>.<Object>[@1|@2] [n]");
      OrmConstraint constraint;
      try {
        constraint.kind = constraint_kind_from_string(tokens[1].text);
      } catch (const Error&) {
        syntax(line_no, tokens[1].col,
               "unknown constraint kind '" + tokens[1].text + "'");
      }
      std::string target = tokens[2].text;
      const size_t at = target.find('@');
      if (at != std::string::npos) {
        const std::string suffix = target.substr(at + 1);
        if (suffix != "1" && suffix != "2")
          syntax(line_no, tokens[2].col, "role position must be @1 or @2");
        constraint.target.position = suffix == "2" ? 2 : 1;
        target.resize(at);
      }
      const size_t dot1 = target.find('.');
      const size_t dot2 = target.find('.', dot1 + 1);
      if (dot1 == std::string::npos || dot2 == std::string::npos ||
          target.find('.', dot2 + 1) != std::string::npos)
        syntax(line_no, tokens[2].col, "target must be <Subject>.<Role>.<Object>");
      constraint.target.subject = target.substr(0, dot1);
      constraint.target.role = target.substr(dot1 + 1, dot2 - dot1 - 1);
      constraint.target.object = target.substr(dot2 + 1);
      if (constraint.target.subject.empty() || constraint.target.role.empty() ||
          constraint.target.object.empty())
        syntax(line_no, tokens[2].col, "target must be <Subject>.<Role>.<Object>");
      if (constraint.kind == ConstraintKind::cardinality) {
        if (tokens.size() != 4)
          syntax(line_no, head.col, "cardinality needs a bound");
        const std::string& n = tokens[3].text;
        if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) {
              return std::isdigit(static_cast<unsigned char>(c));
            }))
          syntax(line_no, tokens[3].col, "cardinality bound must be an integer");
        constraint.cardinality = std::stoi(n);
        if (constraint.cardinality < 1)
          syntax(line_no, tokens[3].col, "cardinality bound must be at least 1");
      } else if (tokens.size() == 4) {
        syntax(line_no, tokens[3].col, "only cardinality takes a bound");
      }
      schema.constraints.push_back(std::move(constraint));
    } else {
      syntax(line_no, head.col, "unknown directive '" + head.text + "'");
    }
  }

  auto require_entity = [&](const Token& token, int at_line) -> const EntityType& {
    const EntityType* entity = schema.find_entity(token.text);
    if (!entity)
      fail(Errc::undeclared_entity, "line " + std::to_string(at_line) + ", col " +
                                        std::to_string(token.col) +
                                        ": unknown entity '" + token.text + "'");
    return *entity;
  };

  for (const auto& fact : pending_facts) {
    require_entity(fact.subject, fact.line);
    require_entity(fact.object, fact.line);
    if (fact.role.text == kSubtypeRole) {
      schema.subtypes.push_back({fact.subject.text, fact.object.text});
    } else {
      schema.facts.push_back({fact.subject.text, fact.role.text, fact.object.text});
    }
  }

  for (const auto& identifier : pending_identifiers) {
    const EntityType& entity = require_entity(identifier.entity, identifier.line);
    const EntityType& by = require_entity(identifier.by, identifier.line);
    if (entity.lexical)
      syntax(identifier.line, identifier.entity.col,
             "'" + entity.name + "' is lexical and cannot carry a reference mode");
    if (!by.lexical)
      syntax(identifier.line, identifier.by.col,
             "reference mode '" + by.name + "' must be a lexical entity");
    for (auto& candidate : schema.entities) {
      if (candidate.name == entity.name) candidate.reference_mode = by.name;
    }
  }

  check_subtype_cycles(schema);
  return schema;
}

std::string print_orm(const OrmSchema& schema) {
  std::string out;
  for (const auto& entity : schema.entities)
    out += "entity " + entity.name + (entity.lexical ? " lexical" : " nonlexical") +
           "\n";
  for (const auto& entity : schema.entities) {
    if (entity.reference_mode)
      out += "identifier " + entity.name + " by " + *entity.reference_mode + "\n";
  }
  for (const auto& fact : schema.facts)
    out += "fact " + fact.subject + " " + fact.role + " " + fact.object + "\n";
  for (const auto& edge : schema.subtypes)
    out += "fact " + edge.sub + " " + std::string(kSubtypeRole) + " " + edge.super +
           "\n";
  for (const auto& constraint : schema.constraints) {
    out += "constraint " + std::string(to_string(constraint.kind)) + " " +
           target_text(constraint.target);
    if (constraint.kind == ConstraintKind::cardinality)
      out += " " + std::to_string(constraint.cardinality);
    out += "\n";
  }
  return out;
}

std::vector<Finding> validate(const OrmSchema& schema) {
  std::vector<Finding> findings;

  // Identified = own reference mode, or some subtype is identified.
  std::set<std::string> identified;
  for (const auto& entity : schema.entities)
    if (entity.reference_mode) identified.insert(entity.name);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& edge : schema.subtypes) {
      if (identified.count(edge.sub) && !identified.count(edge.super)) {
        identified.insert(edge.super);
        changed = true;
      }
    }
  }

  for (const auto& entity : schema.entities) {
    if (entity.lexical) continue;
    if (!identified.count(entity.name)) {
      findings.push_back({"MissingIdentifier", entity.name,
                          "non-lexical entity '" + entity.name +
                              "' has no reference mode"});
      continue;
    }
    if (!entity.reference_mode) continue;
    bool linked = false;
    for (const auto& fact : schema.facts) {
      if ((fact.subject == entity.name && fact.object == *entity.reference_mode) ||
          (fact.object == entity.name && fact.subject == *entity.reference_mode))
        linked = true;
    }
    if (!linked)
      findings.push_back({"DanglingReferenceMode", entity.name,
                          "no fact links '" + entity.name + "' to its reference mode '" +
                              *entity.reference_mode + "'"});
  }

  for (const auto& constraint : schema.constraints) {
    if (!schema.find_fact(constraint.target))
      findings.push_back({"DanglingConstraint", target_text(constraint.target),
                          "no fact matches constraint target '" +
                              target_text(constraint.target) + "'"});
  }
  return findings;
}

std::vector<std::string> verbalize(const OrmSchema& schema) {
  std::vector<std::string> sentences;
  for (const auto& fact : schema.facts)
    sentences.push_back(fact.subject + " " + lowercase_first(fact.role) + " " +
                        fact.object + ".");
  for (const auto& edge : schema.subtypes)
    sentences.push_back("Every " + edge.sub + " is a " + edge.super + ".");
  for (const auto& constraint : schema.constraints) {
    const auto& t = constraint.target;
    const std::string role = lowercase_first(t.role);
    const std::string fact_text = t.subject + " " + role + " " + t.object;
    std::string sentence;
    switch (constraint.kind) {
      case ConstraintKind::uniqueness:
        sentence = t.position == 1
                       ? "Each " + t.subject + " " + role + " at most one " +
                             t.object + "."
                       : "Each " + t.object + " relates to at most one " + t.subject +
                             " in '" + fact_text + "'.";
        break;
      case ConstraintKind::mandatory:
        sentence = t.position == 1
                       ? "Every " + t.subject + " " + role + " at least one " +
                             t.object + "."
                       : "Every " + t.object + " relates to at least one " +
                             t.subject + " in '" + fact_text + "'.";
        break;
      case ConstraintKind::asymmetry:
        sentence = "The relation '" + fact_text + "' is asymmetric.";
        break;
      case ConstraintKind::intransitivity:
        sentence = "The relation '" + fact_text + "' is intransitive.";
        break;
      case ConstraintKind::cardinality: {
        const std::string n = std::to_string(constraint.cardinality);
        sentence = t.position == 1
                       ? "Each " + t.subject + " " + role + " at most " + n + " " +
                             t.object + "s."
                       : "Each " + t.object + " relates to at most " + n + " " +
                             t.subject + "s in '" + fact_text + "'.";
        break;
      }
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

nlohmann::json schema_to_json(const OrmSchema& schema) {
  nlohmann::json entities = nlohmann::json::array();
  for (const auto& entity : schema.entities) {
    nlohmann::json row = {{"name", entity.name}, {"lexical", entity.lexical}};
    row["reference_mode"] = entity.reference_mode
                                ? nlohmann::json(*entity.reference_mode)
                                : nlohmann::json();
    entities.push_back(std::move(row));
  }
  nlohmann::json facts = nlohmann::json::array();
  for (const auto& fact : schema.facts)
    facts.push_back(
        {{"subject", fact.subject}, {"role", fact.role}, {"object", fact.object}});
  nlohmann::json subtypes = nlohmann::json::array();
  for (const auto& edge : schema.subtypes)
    subtypes.push_back({{"sub", edge.sub}, {"super", edge.super}});
  nlohmann::json constraints = nlohmann::json::array();
  for (const auto& constraint : schema.constraints) {
    nlohmann::json row = {{"kind", std::string(to_string(constraint.kind))},
                          {"target",
                           {{"subject", constraint.target.subject},
                            {"role", constraint.target.role},
                            {"object", constraint.target.object},
                            {"position", constraint.target.position}}}};
    row["cardinality"] = constraint.kind == ConstraintKind::cardinality
                             ? nlohmann::json(constraint.cardinality)
                             : nlohmann::json();
    constraints.push_back(std::move(row));
  }
  return {{"entities", entities},
          {"facts", facts},
          {"subtypes", subtypes},
          {"constraints", constraints}};
}

OrmSchema schema_from_json(const nlohmann::json& doc) {
  auto shape = [](bool ok, const std::string& what) {
    if (!ok) fail(Errc::syntax_error, "schema document: " + what);
  };
  shape(doc.is_object(), "expected a JSON object");
  OrmSchema schema;
  if (doc.contains("entities")) {
    shape(doc.at("entities").is_array(), "'entities' must be an array");
    for (const auto& row : doc.at("entities")) {
      shape(row.is_object() && row.contains("name") && row.at("name").is_string(),
            "entity rows need a string 'name'");
      EntityType entity;
      entity.name = row.at("name").get<std::string>();
      shape(row.contains("lexical") && row.at("lexical").is_boolean(),
            "entity rows need a boolean 'lexical'");
      entity.lexical = row.at("lexical").get<bool>();
      if (row.contains("reference_mode") && !row.at("reference_mode").is_null()) {
        shape(row.at("reference_mode").is_string(),
              "'reference_mode' must be a string or null");
        entity.reference_mode = row.at("reference_mode").get<std::string>();
      }
      for (const auto& existing : schema.entities)
        if (existing.name == entity.name)
          fail(Errc::duplicate_entity, "entity '" + entity.name + "' declared twice");
      schema.entities.push_back(std::move(entity));
    }
  }
  auto need_str = [&](const nlohmann::json& row, const char* key) {
    shape(row.is_object() && row.contains(key) && row.at(key).is_string(),
          std::string("rows need a string '") + key + "'");
    return row.at(key).get<std::string>();
  };
  auto require_entity = [&](const std::string& name) {
    if (!schema.find_entity(name))
      fail(Errc::undeclared_entity, "unknown entity '" + name + "'");
  };
  if (doc.contains("facts")) {
    shape(doc.at("facts").is_array(), "'facts' must be an array");
    for (const auto& row : doc.at("facts")) {
      FactType fact{need_str(row, "subject"), need_str(row, "role"),
                    need_str(row, "object")};
      require_entity(fact.subject);
      require_entity(fact.object);
      schema.facts.push_back(std::move(fact));
    }
  }
  if (doc.contains("subtypes")) {
    shape(doc.at("subtypes").is_array(), "'subtypes' must be an array");
    for (const auto& row : doc.at("subtypes")) {
      SubtypeEdge edge{need_str(row, "sub"), need_str(row, "super")};
      require_entity(edge.sub);
      require_entity(edge.super);
      schema.subtypes.push_back(std::move(edge));
    }
  }
  if (doc.contains("constraints")) {
    shape(doc.at("constraints").is_array(), "'constraints' must be an array");
    for (const auto& row : doc.at("constraints")) {
      OrmConstraint constraint;
      constraint.kind = constraint_kind_from_string(need_str(row, "kind"));
      shape(row.contains("target") && row.at("target").is_object(),
            "constraint rows need a 'target' object");
      const auto& target = row.at("target");
      constraint.target.subject = need_str(target, "subject");
      constraint.target.role = need_str(target, "role");
      constraint.target.object = need_str(target, "object");
      if (target.contains("position") && !target.at("position").is_null()) {
        shape(target.at("position").is_number_integer(),
              "'position' must be 1 or 2");
        constraint.target.position = target.at("position").get<int>();
        shape(constraint.target.position == 1 || constraint.target.position == 2,
              "'position' must be 1 or 2");
      }
      if (constraint.kind == ConstraintKind::cardinality) {
        shape(row.contains("cardinality") &&
                  row.at("cardinality").is_number_integer(),
              "cardinality constraints need an integer bound");
        constraint.cardinality = row.at("cardinality").get<int>();
        shape(constraint.cardinality >= 1, "cardinality bound must be at least 1");
      }
      schema.constraints.push_back(std::move(constraint));
    }
  }
  check_subtype_cycles(schema);
  return schema;
}

}  // namespace perdura::orm
