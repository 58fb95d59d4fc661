#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/carm_io.hpp"
#include "carmc/names.hpp"
#include "carmc/validate.hpp"

namespace carmc {

namespace {

struct Line {
  std::string text;  // without the trailing newline
  int number = 0;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int n = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(Line{std::move(line), n++});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

int indent_of(const std::string& s) {
  int col = 1;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) break;
    ++col;
  }
  return col;
}

bool is_blank_or_comment(std::string_view s) {
  s = trim(s);
  return s.empty() || s.front() == '#';
}

/// Matches `keyword` (case-insensitive, may contain spaces) at the start of
/// `s`, followed by end, whitespace or ':'. Returns the remainder.
std::optional<std::string_view> keyword(std::string_view s,
                                        std::string_view kw) {
  s = trim(s);
  if (s.size() < kw.size() || !names::iequals(s.substr(0, kw.size()), kw)) {
    return std::nullopt;
  }
  std::string_view rest = s.substr(kw.size());
  if (!rest.empty() && rest.front() != ':' &&
      !std::isspace(static_cast<unsigned char>(rest.front()))) {
    return std::nullopt;
  }
  return rest;
}

/// `key: value` with the key matched case-insensitively.
std::optional<std::string> keyed_value(std::string_view s,
                                       std::string_view key) {
  auto rest = keyword(s, key);
  if (!rest) return std::nullopt;
  std::string_view r = trim(*rest);
  if (r.empty() || r.front() != ':') return std::nullopt;
  return std::string(trim(r.substr(1)));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    std::string_view item =
        s.substr(start, pos == std::string_view::npos ? s.npos : pos - start);
    std::string t = names::squeeze(item);
    if (!t.empty()) out.push_back(std::move(t));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_end(std::string_view s, std::string_view block) {
  auto rest = keyword(s, "end");
  if (!rest) return false;
  std::string_view r = trim(*rest);
  return r.empty() || names::iequals(r, block);
}

// ---------------------------------------------------------------------------
// Message structure rows.

struct MessageRow {
  int line = 0;
  int field_col = 1;  // column where the FIELD text starts
  std::string field;
  std::string op;
  std::string domain;
  std::string example;
  std::string extends;
  int op_col = 1;
  bool used = false;
};

struct MsgToken {
  enum class Kind { name, equals, open_agg, close_agg, open_iter, close_iter, plus };
  Kind kind;
  std::string text;
  std::size_t row = 0;
  int col = 1;
};

class MessageParser {
 public:
  MessageParser(std::vector<MessageRow> rows, std::string file,
                const std::string& event_id, DiagnosticSink& sink)
      : rows_(std::move(rows)), file_(std::move(file)), event_id_(event_id),
        sink_(sink) {
    tokenize();
  }

  Substructure parse(const SourceLoc& block_loc) {
    if (tokens_.empty()) {
      throw CompileError(block_loc, codes::kSyntax,
                         "event " + event_id_ + " has an empty message structure");
    }
    Substructure root = parse_substructure();
    if (pos_ < tokens_.size()) {
      fail(tokens_[pos_], "unexpected '" + tokens_[pos_].text +
                              "' after the end of the message structure");
    }
    if (!root.is_aggregation()) {
      throw CompileError(root.loc, codes::kSyntax,
                         "message structure root of " + event_id_ +
                             " must be an aggregation '< ... >'");
    }
    for (const auto& row : rows_) {
      const bool has_meta = !row.op.empty() || !row.domain.empty() ||
                            !row.example.empty() || !row.extends.empty();
      if (has_meta && !row.used) {
        throw CompileError(SourceLoc{file_, row.line, row.op_col},
                           codes::kSyntax,
                           "field columns on a row without a field");
      }
    }
    return root;
  }

 private:
  void tokenize() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::string& f = rows_[r].field;
      std::size_t i = 0;
      while (i < f.size()) {
        char c = f[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
          ++i;
          continue;
        }
        const int col = rows_[r].field_col + static_cast<int>(i);
        MsgToken::Kind kind;
        bool structural = true;
        switch (c) {
          case '=': kind = MsgToken::Kind::equals; break;
          case '<': kind = MsgToken::Kind::open_agg; break;
          case '>': kind = MsgToken::Kind::close_agg; break;
          case '{': kind = MsgToken::Kind::open_iter; break;
          case '}': kind = MsgToken::Kind::close_iter; break;
          case '+': kind = MsgToken::Kind::plus; break;
          default: structural = false; kind = MsgToken::Kind::name; break;
        }
        if (structural) {
          tokens_.push_back(MsgToken{kind, std::string(1, c), r, col});
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < f.size() && std::string_view("=<>{}+").find(f[j]) ==
                                   std::string_view::npos) {
          ++j;
        }
        tokens_.push_back(MsgToken{MsgToken::Kind::name,
                                   names::squeeze(f.substr(i, j - i)), r, col});
        i = j;
      }
    }
  }

  [[noreturn]] void fail(const MsgToken& tok, const std::string& msg) const {
    throw CompileError(SourceLoc{file_, rows_[tok.row].line, tok.col},
                       codes::kSyntax, msg);
  }

  [[noreturn]] void fail_eof(const std::string& expected) const {
    const auto& row = rows_.back();
    throw CompileError(
        SourceLoc{file_, row.line, row.field_col + static_cast<int>(row.field.size())},
        codes::kSyntax,
        "unexpected end of message structure; expected " + expected);
  }

  const MsgToken* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }

  const MsgToken& expect(MsgToken::Kind kind, const char* what) {
    const MsgToken* t = peek();
    if (!t) fail_eof(what);
    if (t->kind != kind) fail(*t, std::string("expected ") + what + ", found '" + t->text + "'");
    ++pos_;
    return *t;
  }

  SourceLoc loc_of(const MsgToken& t) const {
    return SourceLoc{file_, rows_[t.row].line, t.col};
  }

  Substructure parse_substructure() {
    const MsgToken& name = expect(MsgToken::Kind::name, "a substructure name");
    return parse_substructure_body(name);
  }

  Substructure parse_substructure_body(const MsgToken& name) {
    expect(MsgToken::Kind::equals, "'='");
    Substructure sub;
    sub.name = name.text;
    sub.loc = loc_of(name);
    const MsgToken* open = peek();
    if (!open) fail_eof("'<' or '{'");
    if (open->kind == MsgToken::Kind::open_agg) {
      ++pos_;
      sub.kind = Substructure::Kind::aggregation;
      parse_members(sub);
    } else if (open->kind == MsgToken::Kind::open_iter) {
      ++pos_;
      sub.kind = Substructure::Kind::iteration;
      sub.members.push_back(Member{parse_substructure()});
      expect(MsgToken::Kind::close_iter, "'}'");
    } else {
      fail(*open, "expected '<' or '{' after '" + name.text + " ='");
    }
    return sub;
  }

  void parse_members(Substructure& agg) {
    while (true) {
      const MsgToken* t = peek();
      if (!t) fail_eof("'>'");
      if (t->kind == MsgToken::Kind::close_agg) {
        ++pos_;
        return;
      }
      if (t->kind != MsgToken::Kind::name) {
        fail(*t, "expected a field or substructure name, found '" + t->text + "'");
      }
      ++pos_;
      const MsgToken* next = peek();
      if (next && next->kind == MsgToken::Kind::equals) {
        agg.members.push_back(Member{parse_substructure_body(*t)});
      } else {
        agg.members.push_back(Member{make_field(*t)});
      }
      const MsgToken* sep = peek();
      if (!sep) fail_eof("'+' or '>'");
      if (sep->kind == MsgToken::Kind::plus) {
        ++pos_;
      } else if (sep->kind != MsgToken::Kind::close_agg) {
        fail(*sep, "expected '+' or '>', found '" + sep->text + "'");
      }
    }
  }

  std::variant<DataField, ReferenceField, Substructure> make_field(
      const MsgToken& name) {
    MessageRow& row = rows_[name.row];
    if (row.used) {
      fail(name, "only one field may be declared per row");
    }
    row.used = true;
    const SourceLoc loc = loc_of(name);
    if (row.domain.empty()) {
      fail(name, "field '" + name.text + "' has no domain");
    }
    if (!row.op.empty() && row.op != "g" && row.op != "i") {
      sink_.warning(SourceLoc{file_, row.line, row.op_col}, codes::kOpCode,
                    "unknown op code '" + row.op + "' on field '" + name.text +
                        "' is kept as is");
    }
    bool extends = false;
    if (!row.extends.empty()) {
      std::string e = names::to_lower(row.extends);
      if (e.rfind("extends:", 0) == 0) e = std::string(trim(e.substr(8)));
      if (e == "true" || e == "yes") {
        extends = true;
      } else if (e != "false" && e != "no") {
        fail(name, "bad 'extends business object' value '" + row.extends + "'");
      }
    }
    if (auto domain = parse_basic_domain(row.domain)) {
      if (extends) {
        fail(name, "only reference fields can extend a business object");
      }
      return DataField{name.text, row.op, *domain, row.example, loc};
    }
    return ReferenceField{name.text, row.op, names::squeeze(row.domain),
                          row.example, extends, loc};
  }

  std::vector<MessageRow> rows_;
  std::string file_;
  const std::string& event_id_;
  DiagnosticSink& sink_;
  std::vector<MsgToken> tokens_;
  std::size_t pos_ = 0;
};

MessageRow split_row(const Line& line) {
  MessageRow row;
  row.line = line.number;
  std::vector<std::pair<std::string, int>> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = line.text.find('|', start);
    std::string_view raw = std::string_view(line.text).substr(
        start, bar == std::string::npos ? std::string::npos : bar - start);
    cols.emplace_back(std::string(raw), static_cast<int>(start) + 1);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  row.field = cols[0].first;
  row.field_col = cols[0].second;
  auto col = [&](std::size_t i) {
    return i < cols.size() ? std::string(trim(cols[i].first)) : std::string();
  };
  row.op = col(1);
  row.op_col = cols.size() > 1 ? cols[1].second : 1;
  row.domain = names::squeeze(col(2));
  row.example = col(3);
  row.extends = col(4);
  return row;
}

// ---------------------------------------------------------------------------
// Annotation sections.

void parse_annotation_line(const Line& line, const std::string& file,
                           std::string& section, AnnotationSet& out) {
  std::string_view t = trim(line.text);
  const int col = indent_of(line.text);
  if (t.front() == '[') {
    if (t.back() != ']') {
      throw CompileError(SourceLoc{file, line.number, col}, codes::kSyntax,
                         "annotation section header must end with ']'");
    }
    section = names::squeeze(t.substr(1, t.size() - 2));
    if (section.empty()) {
      throw CompileError(SourceLoc{file, line.number, col}, codes::kSyntax,
                         "empty annotation path");
    }
    auto& entry = out.entries[section];
    entry.loc = SourceLoc{file, line.number, col};
    return;
  }
  const std::size_t eq = t.find('=');
  if (eq == std::string_view::npos) {
    throw CompileError(SourceLoc{file, line.number, col}, codes::kSyntax,
                       "expected 'key = value' in annotations");
  }
  if (section.empty()) {
    throw CompileError(SourceLoc{file, line.number, col}, codes::kSyntax,
                       "annotation outside a [path] section");
  }
  std::string key = names::snake(t.substr(0, eq));
  std::string value(trim(t.substr(eq + 1)));
  out.entries[section].values.insert_or_assign(
      key, AnnotationValue{std::move(value), SourceLoc{file, line.number, col}});
}

// ---------------------------------------------------------------------------
// Block-structured CARM text.

class CarmParser {
 public:
  CarmParser(std::string_view text, std::string file, DiagnosticSink& sink)
      : lines_(split_lines(text)), file_(std::move(file)), sink_(sink) {}

  void parse_into(RequirementsModel& model) {
    while (next_content()) {
      const Line& line = lines_[pos_];
      if (auto v = keyed_value(line.text, "objects")) {
        for (auto& name : split_list(*v, ',')) {
          model.business_objects.insert(std::move(name));
        }
        ++pos_;
      } else if (auto rest = keyword(line.text, "process")) {
        ++pos_;
        model.processes.push_back(parse_process(*rest, line));
      } else if (keyword(line.text, "annotations")) {
        ++pos_;
        parse_annotations_block(model.annotations);
      } else {
        fail(line, "expected 'objects:', 'process' or 'annotations'");
      }
    }
  }

 private:
  // Advances past blank/comment lines; false at end of input.
  bool next_content() {
    while (pos_ < lines_.size() && is_blank_or_comment(lines_[pos_].text)) ++pos_;
    return pos_ < lines_.size();
  }

  SourceLoc loc(const Line& line) const {
    return SourceLoc{file_, line.number, indent_of(line.text)};
  }

  [[noreturn]] void fail(const Line& line, const std::string& msg) const {
    throw CompileError(loc(line), codes::kSyntax, msg);
  }

  [[noreturn]] void fail_eof(const std::string& what) const {
    const int last = lines_.empty() ? 1 : lines_.back().number;
    throw CompileError(SourceLoc{file_, last, 1}, codes::kSyntax,
                       "unexpected end of file; expected " + what);
  }

  // "ID: Name" or "ID"
  static std::pair<std::string, std::string> id_and_name(std::string_view rest) {
    rest = trim(rest);
    const std::size_t colon = rest.find(':');
    if (colon == std::string_view::npos) return {names::squeeze(rest), ""};
    return {names::squeeze(rest.substr(0, colon)),
            names::squeeze(rest.substr(colon + 1))};
  }

  BusinessProcess parse_process(std::string_view header, const Line& line) {
    BusinessProcess proc;
    std::tie(proc.id, proc.name) = id_and_name(header);
    proc.loc = loc(line);
    if (proc.id.empty()) fail(line, "process needs an id");
    while (true) {
      if (!next_content()) fail_eof("'end process'");
      const Line& l = lines_[pos_];
      if (is_end(l.text, "process")) {
        ++pos_;
        return proc;
      }
      if (auto rest = keyword(l.text, "event")) {
        ++pos_;
        proc.events.push_back(parse_event(*rest, l));
      } else if (names::iequals(trim(l.text), "start")) {
        proc.has_start_node = true;
        ++pos_;
      } else if (l.text.find("->") != std::string::npos) {
        parse_precedence(l, proc);
        ++pos_;
      } else {
        fail(l, "expected 'event', a precedence 'A -> B' or 'end process'");
      }
    }
  }

  void parse_precedence(const Line& line, BusinessProcess& proc) {
    std::string_view t = trim(line.text);
    MergeKind merge = MergeKind::plain;
    bool loopback = false;
    bool merge_set = false;
    if (!t.empty() && t.back() == ']') {
      const std::size_t open = t.rfind('[');
      if (open == std::string_view::npos) fail(line, "unbalanced ']'");
      for (const auto& flag : split_list(t.substr(open + 1, t.size() - open - 2), ',')) {
        const std::string f = names::to_lower(flag);
        MergeKind k = MergeKind::plain;
        if (f == "loopback") {
          loopback = true;
          continue;
        }
        if (f == "and" || f == "and-join" || f == "and_join") {
          k = MergeKind::and_join;
        } else if (f == "or" || f == "or-merge" || f == "or_merge") {
          k = MergeKind::or_merge;
        } else {
          fail(line, "unknown precedence flag '" + flag + "'");
        }
        if (merge_set && k != merge) fail(line, "conflicting merge flags");
        merge = k;
        merge_set = true;
      }
      t = trim(t.substr(0, open));
    }
    const std::size_t arrow = t.find("->");
    auto lhs = split_list(t.substr(0, arrow), ',');
    auto rhs = split_list(t.substr(arrow + 2), ',');
    if (lhs.empty() || rhs.empty()) fail(line, "precedence needs both endpoints");
    for (auto& from : lhs) {
      if (names::iequals(from, "start")) {
        from = std::string(kStartNode);
        proc.has_start_node = true;
      } else if (names::iequals(from, "end")) {
        fail(line, "the end node cannot precede an event");
      }
      for (auto to : rhs) {
        if (names::iequals(to, "end")) {
          to = std::string(kEndNode);
        } else if (names::iequals(to, "start")) {
          fail(line, "the start node cannot have incoming precedences");
        }
        if (from == kStartNode && to == kEndNode) {
          fail(line, "start cannot directly precede end");
        }
        proc.precedences.push_back(
            PrecedenceRelation{from, to, merge, loopback, loc(line)});
      }
    }
  }

  CommunicativeEvent parse_event(std::string_view header, const Line& line) {
    CommunicativeEvent ev;
    std::tie(ev.id, ev.name) = id_and_name(header);
    ev.loc = loc(line);
    if (ev.id.empty()) fail(line, "event needs an id");
    bool has_message = false;
    while (true) {
      if (!next_content()) fail_eof("'end event'");
      const Line& l = lines_[pos_];
      if (is_end(l.text, "event")) {
        ++pos_;
        break;
      }
      if (auto v = keyed_value(l.text, "message")) {
        if (has_message) fail(l, "event " + ev.id + " has two message structures");
        if (!v->empty()) fail(l, "message rows start on the line after 'message:'");
        ++pos_;
        ev.message = parse_message(ev.id, l);
        has_message = true;
        continue;
      }
      if (auto rest = keyword(l.text, "variant")) {
        auto [id, cond] = id_and_name(*rest);
        if (id.empty() || cond.empty()) {
          fail(l, "variant needs an id and a specialisation condition: 'variant A1: cond'");
        }
        ev.variants.push_back(EventVariant{id, cond, loc(l)});
      } else if (auto v = keyed_value(l.text, "restriction")) {
        ev.restrictions.push_back(parse_restriction(*v, l));
      } else if (auto v = keyed_value(l.text, "identifier")) {
        auto fields = split_list(*v, ',');
        if (fields.empty()) fail(l, "identifier needs at least one field name");
        ev.identifier = std::move(fields);
      } else if (auto v = keyed_value(l.text, "goals")) {
        ev.goals = *v;
      } else if (auto v = keyed_value(l.text, "description")) {
        ev.description = *v;
      } else if (auto v = keyed_value(l.text, "primary actor")) {
        ev.primary_actor = *v;
      } else if (auto v = keyed_value(l.text, "interface actor")) {
        ev.interface_actor = *v;
      } else if (auto v = keyed_value(l.text, "channel")) {
        ev.channel = *v;
      } else if (auto v = keyed_value(l.text, "communication channel")) {
        ev.channel = *v;
      } else if (auto v = keyed_value(l.text, "treatments")) {
        ev.treatments = *v;
      } else if (auto v = keyed_value(l.text, "linked communications")) {
        ev.linked_communications = *v;
      } else {
        fail(l, "unknown event property");
      }
      ++pos_;
    }
    if (!has_message) {
      throw CompileError(ev.loc, codes::kSyntax,
                         "event " + ev.id + " has no message structure");
    }
    return ev;
  }

  CardinalityRestriction parse_restriction(const std::string& value,
                                           const Line& line) {
    // "<subject> <card> [<card>]": cardinalities are trailing tokens.
    std::vector<std::string> tokens = split_list(value, ' ');
    std::vector<Cardinality> cards;
    while (!tokens.empty() && cards.size() < 2) {
      auto c = parse_cardinality(tokens.back());
      if (!c) break;
      cards.insert(cards.begin(), *c);
      tokens.pop_back();
    }
    if (cards.empty() || tokens.empty()) {
      fail(line, "restriction must read '<field> <min:max> [<min:max>]'");
    }
    std::string subject;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) subject += ' ';
      subject += tokens[i];
    }
    CardinalityRestriction r;
    r.subject = names::squeeze(subject);
    r.referenced_side = cards[0];
    if (cards.size() > 1) r.referrer_side = cards[1];
    r.loc = loc(line);
    return r;
  }

  Substructure parse_message(const std::string& event_id, const Line& header) {
    std::vector<MessageRow> rows;
    while (true) {
      if (pos_ >= lines_.size()) fail_eof("'end message'");
      const Line& l = lines_[pos_];
      if (is_blank_or_comment(l.text)) {
        ++pos_;
        continue;
      }
      if (is_end(l.text, "message")) {
        ++pos_;
        break;
      }
      MessageRow row = split_row(l);
      ++pos_;
      if (rows.empty() && names::iequals(names::squeeze(row.field), "FIELD")) {
        continue;  // column header
      }
      rows.push_back(std::move(row));
    }
    MessageParser parser(std::move(rows), file_, event_id, sink_);
    return parser.parse(loc(header));
  }

  void parse_annotations_block(AnnotationSet& out) {
    std::string section;
    while (true) {
      if (!next_content()) fail_eof("'end annotations'");
      const Line& l = lines_[pos_];
      if (is_end(l.text, "annotations")) {
        ++pos_;
        return;
      }
      parse_annotation_line(l, file_, section, out);
      ++pos_;
    }
  }

  std::vector<Line> lines_;
  std::string file_;
  DiagnosticSink& sink_;
  std::size_t pos_ = 0;
};

}  // namespace

RequirementsModel parse_sources(const std::vector<Source>& sources,
                                DiagnosticSink& sink) {
  RequirementsModel model;
  for (const auto& src : sources) {
    CarmParser parser(src.text, src.name, sink);
    parser.parse_into(model);
  }
  DiagnosticSink semantic;
  check_parse_invariants(model, semantic);
  if (semantic.has_errors()) throw CompileError(semantic.sorted());
  return model;
}

RequirementsModel parse_model(std::string_view text, std::string_view file,
                              DiagnosticSink& sink) {
  return parse_sources({Source{std::string(file), std::string(text)}}, sink);
}

RequirementsModel parse_model(std::string_view text, std::string_view file) {
  DiagnosticSink sink;
  return parse_model(text, file, sink);
}

AnnotationSet parse_annotations(std::string_view text, std::string_view file) {
  AnnotationSet out;
  std::string section;
  for (const auto& line : split_lines(text)) {
    if (is_blank_or_comment(line.text)) continue;
    parse_annotation_line(line, std::string(file), section, out);
  }
  return out;
}

}  // namespace carmc
