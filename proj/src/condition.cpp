#include "carmc/condition.hpp"

#include <cctype>

#include "carmc/names.hpp"

namespace carmc {

namespace {

struct Lexeme {
  enum class Kind { word, number, string, op } kind;
  std::string text;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::vector<Lexeme> lex(std::string_view s) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\'' || c == '"') {
      std::size_t j = s.find(c, i + 1);
      if (j == std::string_view::npos) j = s.size() - 1;
      out.push_back({Lexeme::Kind::string, std::string(s.substr(i, j - i + 1))});
      i = j + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) {
        ++j;
      }
      // "2nd" style tokens are words, not numbers.
      if (j < s.size() && word_char(s[j])) {
        while (j < s.size() && word_char(s[j])) ++j;
        out.push_back({Lexeme::Kind::word, std::string(s.substr(i, j - i))});
      } else {
        out.push_back({Lexeme::Kind::number, std::string(s.substr(i, j - i))});
      }
      i = j;
    } else if (word_char(c)) {
      std::size_t j = i;
      while (j < s.size() && word_char(s[j])) ++j;
      out.push_back({Lexeme::Kind::word, std::string(s.substr(i, j - i))});
      i = j;
    } else {
      static constexpr std::string_view two[] = {">=", "<=", "<>", "!=", "==", "&&", "||"};
      std::size_t len = 1;
      for (auto t : two) {
        if (s.substr(i, 2) == t) len = 2;
      }
      out.push_back({Lexeme::Kind::op, std::string(s.substr(i, len))});
      i += len;
    }
  }
  return out;
}

bool is_keyword(const std::string& w) {
  const std::string l = names::to_lower(w);
  return l == "and" || l == "or" || l == "not" || l == "true" || l == "false";
}

}  // namespace

std::vector<ConditionPiece> parse_condition(
    std::string_view text, const std::vector<std::string>& field_names) {
  const auto lexemes = lex(text);
  std::vector<ConditionPiece> out;
  std::size_t i = 0;
  while (i < lexemes.size()) {
    const Lexeme& lx = lexemes[i];
    if (lx.kind == Lexeme::Kind::op) {
      out.push_back({ConditionPiece::Kind::op, lx.text});
      ++i;
      continue;
    }
    if (lx.kind == Lexeme::Kind::string) {
      out.push_back({ConditionPiece::Kind::literal, lx.text});
      ++i;
      continue;
    }
    // Longest run of word/number lexemes equal to a field name.
    std::size_t best_len = 0;
    std::string best_name;
    std::string run;
    for (std::size_t j = i; j < lexemes.size(); ++j) {
      if (lexemes[j].kind != Lexeme::Kind::word &&
          lexemes[j].kind != Lexeme::Kind::number) {
        break;
      }
      run += (j == i ? "" : " ") + lexemes[j].text;
      for (const auto& f : field_names) {
        if (names::iequals(names::squeeze(f), run)) {
          best_len = j - i + 1;
          best_name = f;
        }
      }
    }
    if (best_len > 0) {
      out.push_back({ConditionPiece::Kind::field, best_name});
      i += best_len;
    } else if (lx.kind == Lexeme::Kind::number) {
      out.push_back({ConditionPiece::Kind::literal, lx.text});
      ++i;
    } else if (is_keyword(lx.text)) {
      out.push_back({ConditionPiece::Kind::keyword, lx.text});
      ++i;
    } else {
      // Group adjacent unknown words so "Final dat" reports as one name.
      std::string name = lx.text;
      ++i;
      while (i < lexemes.size() && lexemes[i].kind == Lexeme::Kind::word &&
             !is_keyword(lexemes[i].text)) {
        name += " " + lexemes[i].text;
        ++i;
      }
      out.push_back({ConditionPiece::Kind::unknown, name});
    }
  }
  return out;
}

std::vector<std::string> unknown_identifiers(
    std::string_view text, const std::vector<std::string>& field_names) {
  std::vector<std::string> out;
  for (const auto& p : parse_condition(text, field_names)) {
    if (p.kind == ConditionPiece::Kind::unknown) out.push_back(p.text);
  }
  return out;
}

std::string render_condition(
    const std::vector<ConditionPiece>& pieces,
    const std::function<std::string(const std::string&)>& rename) {
  std::string out;
  bool suppress_space = true;
  for (const auto& p : pieces) {
    const bool closing = p.kind == ConditionPiece::Kind::op && p.text == ")";
    if (!suppress_space && !closing) out += ' ';
    out += p.kind == ConditionPiece::Kind::field ? rename(p.text) : p.text;
    suppress_space = p.kind == ConditionPiece::Kind::op && p.text == "(";
  }
  return out;
}

}  // namespace carmc
