#include "carmc/emit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "carmc/names.hpp"

namespace carmc {

using nlohmann::json;

std::optional<std::set<Format>> parse_formats(std::string_view list) {
  std::set<Format> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string item = names::to_lower(names::squeeze(
        list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start)));
    if (item == "json" || item == "model_json") {
      out.insert(Format::model_json);
    } else if (item == "dot") {
      out.insert(Format::class_dot);
      out.insert(Format::std_dot);
    } else if (item == "class_dot") {
      out.insert(Format::class_dot);
    } else if (item == "std_dot") {
      out.insert(Format::std_dot);
    } else if (item == "trace" || item == "trace_report") {
      out.insert(Format::trace_report);
    } else {
      return std::nullopt;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// -- JSON -------------------------------------------------------------------

namespace {

json card_json(const Cardinality& c) {
  return json{{"min", c.min}, {"max", c.many ? json("M") : json(1)}};
}

Cardinality card_from(const json& j) {
  Cardinality c;
  c.min = j.at("min").get<int>();
  const json& max = j.at("max");
  c.many = max.is_string();
  if (c.many && max.get<std::string>() != "M") {
    throw std::invalid_argument("max must be 1 or \"M\"");
  }
  return c;
}

const char* to_string(ArgKind k) {
  return k == ArgKind::data_valued ? "data_valued" : "object_valued";
}

template <typename Enum, std::size_t N>
Enum enum_from(const json& j, const Enum (&values)[N]) {
  const std::string s = j.get<std::string>();
  for (Enum v : values) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown value '" + s + "'");
}

constexpr DataType kDataTypes[] = {
    DataType::Nat,  DataType::Int,  DataType::Real,     DataType::Autonumeric,
    DataType::String, DataType::Text, DataType::Time, DataType::Date,
    DataType::DateTime, DataType::Bool, DataType::Image, DataType::Blob};
constexpr AttrType kAttrTypes[] = {AttrType::constant, AttrType::variable};
constexpr ServiceKind kServiceKinds[] = {
    ServiceKind::creation, ServiceKind::end_of_editing, ServiceKind::edit,
    ServiceKind::shared_insert, ServiceKind::shared_delete};
constexpr RelOrigin kOrigins[] = {RelOrigin::nesting, RelOrigin::reference,
                                  RelOrigin::extension};

constexpr ArgKind kArgKinds[] = {ArgKind::data_valued, ArgKind::object_valued};

json argument_json(const Argument& a) {
  json j{{"name", a.name}, {"kind", to_string(a.kind)}, {"null_allowed", a.null_allowed}};
  if (a.data_type) j["data_type"] = to_string(*a.data_type);
  if (!a.class_ref.empty()) j["class"] = a.class_ref;
  if (a.size) j["size"] = *a.size;
  return j;
}

Argument argument_from(const json& j) {
  Argument a;
  a.name = j.at("name").get<std::string>();
  a.kind = enum_from(j.at("kind"), kArgKinds);
  a.null_allowed = j.at("null_allowed").get<bool>();
  if (j.contains("data_type")) a.data_type = enum_from(j.at("data_type"), kDataTypes);
  if (j.contains("class")) a.class_ref = j.at("class").get<std::string>();
  if (j.contains("size")) a.size = j.at("size").get<int>();
  return a;
}

}  // namespace

std::string model_to_json(const ObjectModel& om) {
  json classes = json::array();
  for (const auto& c : om.classes) {
    json attrs = json::array();
    for (const auto& a : c.attributes) {
      json ja{{"name", a.name},
              {"id", a.id},
              {"attr_type", to_string(a.attr_type)},
              {"data_type", to_string(a.data_type)},
              {"requested", a.requested},
              {"null_allowed", a.null_allowed}};
      if (a.size) ja["size"] = *a.size;
      attrs.push_back(std::move(ja));
    }
    json services = json::array();
    for (const auto& s : c.services) {
      json args = json::array();
      for (const auto& a : s.arguments) args.push_back(argument_json(a));
      json js{{"name", s.name}, {"kind", to_string(s.kind)}, {"arguments", args},
              {"agents", s.agents}};
      if (s.shared_with) js["shared_with"] = *s.shared_with;
      services.push_back(std::move(js));
    }
    classes.push_back(json{{"name", c.name}, {"attributes", attrs}, {"services", services}});
  }
  json rels = json::array();
  for (const auto& r : om.relationships) {
    rels.push_back(json{{"classA", r.class_a},
                        {"cardA", card_json(r.card_a)},
                        {"classB", r.class_b},
                        {"cardB", card_json(r.card_b)},
                        {"origin", to_string(r.origin)},
                        {"role", r.role}});
  }
  json txns = json::array();
  for (const auto& t : om.transactions) {
    txns.push_back(json{{"name", t.name}, {"owner", t.owner_class},
                        {"components", t.component_services}});
  }
  json doc{{"classes", classes}, {"relationships", rels}, {"transactions", txns}};
  return doc.dump(2) + "\n";
}

ObjectModel model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    ObjectModel om;
    for (const auto& jc : doc.at("classes")) {
      Class c;
      c.name = jc.at("name").get<std::string>();
      for (const auto& ja : jc.at("attributes")) {
        Attribute a;
        a.name = ja.at("name").get<std::string>();
        a.id = ja.at("id").get<bool>();
        a.attr_type = enum_from(ja.at("attr_type"), kAttrTypes);
        a.data_type = enum_from(ja.at("data_type"), kDataTypes);
        a.requested = ja.at("requested").get<bool>();
        a.null_allowed = ja.at("null_allowed").get<bool>();
        if (ja.contains("size")) a.size = ja.at("size").get<int>();
        c.attributes.push_back(std::move(a));
      }
      for (const auto& js : jc.at("services")) {
        Service s;
        s.name = js.at("name").get<std::string>();
        s.kind = enum_from(js.at("kind"), kServiceKinds);
        for (const auto& a : js.at("arguments")) s.arguments.push_back(argument_from(a));
        s.agents = js.at("agents").get<std::vector<std::string>>();
        if (js.contains("shared_with")) s.shared_with = js.at("shared_with").get<std::string>();
        c.services.push_back(std::move(s));
      }
      om.classes.push_back(std::move(c));
    }
    for (const auto& jr : doc.at("relationships")) {
      StructuralRelationship r;
      r.class_a = jr.at("classA").get<std::string>();
      r.class_b = jr.at("classB").get<std::string>();
      r.card_a = card_from(jr.at("cardA"));
      r.card_b = card_from(jr.at("cardB"));
      r.origin = enum_from(jr.at("origin"), kOrigins);
      r.role = jr.at("role").get<std::string>();
      om.relationships.push_back(std::move(r));
    }
    for (const auto& jt : doc.at("transactions")) {
      om.transactions.push_back(Transaction{
          jt.at("name").get<std::string>(), jt.at("owner").get<std::string>(),
          jt.at("components").get<std::vector<std::string>>()});
    }
    return om;
  } catch (const json::exception& e) {
    throw CompileError(SourceLoc{}, codes::kIo, std::string("malformed model JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CompileError(SourceLoc{}, codes::kIo, std::string("malformed model JSON: ") + e.what());
  }
}

// -- DOT --------------------------------------------------------------------

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Text inside a record label, where braces, bars and angle brackets are
// structural.
std::string record_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("{}|<>\"\\").find(c) != std::string_view::npos) {
      out += '\\';
    }
    out += c;
  }
  return out;
}

std::string argument_text(const Argument& a) {
  if (a.kind == ArgKind::object_valued) return a.name + " : " + a.class_ref;
  std::string t = a.name + " : " + (a.data_type ? to_string(*a.data_type) : "?");
  if (a.size) t += "(" + std::to_string(*a.size) + ")";
  return t;
}

}  // namespace

std::string class_diagram_dot(const ObjectModel& om) {
  std::ostringstream out;
  out << "graph classes {\n";
  out << "  node [shape=record, fontname=\"Helvetica\"];\n";
  for (const auto& c : om.classes) {
    std::string label = "{" + record_text(c.name) + "|";
    for (const auto& a : c.attributes) {
      std::string line = a.name + " : " + to_string(a.data_type);
      if (a.size) line += "(" + std::to_string(*a.size) + ")";
      if (a.id) line += " (id)";
      label += record_text(line) + "\\l";
    }
    label += "|";
    for (const auto& s : c.services) {
      std::string line;
      if (s.kind == ServiceKind::creation) line += "<<new>> ";
      if (s.shared()) line += "<<shared>> ";
      line += s.name + "(";
      for (std::size_t i = 0; i < s.arguments.size(); ++i) {
        line += (i ? ", " : "") + argument_text(s.arguments[i]);
      }
      line += ")";
      label += record_text(line) + "\\l";
    }
    label += "}";
    out << "  " << dot_quote(c.name) << " [label=\"" << label << "\"];\n";
  }
  for (const auto& r : om.relationships) {
    out << "  " << dot_quote(r.class_a) << " -- " << dot_quote(r.class_b)
        << " [label=" << dot_quote(r.card_a.str() + " --- " + r.card_b.str()) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string std_to_dot(const StateTransitionDiagram& std) {
  std::ostringstream out;
  out << "digraph " << dot_quote("std:" + std.class_name) << " {\n";
  out << "  rankdir=LR;\n";
  for (const auto& s : std.states) {
    out << "  " << dot_quote(s.name);
    switch (s.kind) {
      case StateKind::pre_creation:
        out << " [shape=circle, style=filled, fillcolor=black, width=0.25, label=\"\", "
               "xlabel="
            << dot_quote(s.name) << "]";
        break;
      case StateKind::intermediate:
        out << " [shape=ellipse]";
        break;
      case StateKind::auxiliary:
        out << " [shape=ellipse, style=dashed]";
        break;
    }
    out << ";\n";
  }
  for (const auto& t : std.transitions) {
    out << "  " << dot_quote(t.from) << " -> " << dot_quote(t.to) << " [label=" << dot_quote(t.label())
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string trace_to_tsv(const TraceMap& trace) {
  std::vector<std::string> rows;
  for (const auto& l : trace.links()) rows.push_back(l.rule + "\t" + l.source + "\t" + l.derived);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

// -- Files ------------------------------------------------------------------

namespace {

void write_atomically(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw CompileError(SourceLoc{target.string(), 0, 0}, codes::kIo,
                         "cannot write " + target.string());
    }
    f << content;
    f.flush();
    if (!f) {
      throw CompileError(SourceLoc{target.string(), 0, 0}, codes::kIo,
                         "failed writing " + target.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw CompileError(SourceLoc{target.string(), 0, 0}, codes::kIo,
                       "cannot replace " + target.string());
  }
}

}  // namespace

std::vector<std::filesystem::path> emit_model(const ObjectModel& om,
                                              const std::vector<StateTransitionDiagram>& stds,
                                              const TraceMap& trace, const EmitConfig& cfg) {
  if (cfg.formats.empty()) {
    throw CompileError(SourceLoc{}, codes::kIo, "no output format selected");
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.out_dir)) {
    throw CompileError(SourceLoc{cfg.out_dir.string(), 0, 0}, codes::kIo,
                       "cannot create output directory " + cfg.out_dir.string());
  }
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = cfg.out_dir / name;
    write_atomically(path, content);
    written.push_back(path);
  };
  if (cfg.formats.count(Format::model_json)) put("model.json", model_to_json(om));
  if (cfg.formats.count(Format::class_dot) && !om.classes.empty()) {
    put("classes.dot", class_diagram_dot(om));
  }
  if (cfg.formats.count(Format::std_dot)) {
    for (const auto& s : stds) put("std_" + s.class_name + ".dot", std_to_dot(s));
  }
  if (cfg.formats.count(Format::trace_report)) put("trace.tsv", trace_to_tsv(trace));
  return written;
}

}  // namespace carmc
