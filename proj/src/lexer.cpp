#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

namespace hyloc::detail {

namespace {

constexpr std::array<std::string_view, 5> kSymbols = {"<=>", "=>", "->", "\\/", "/\\"};
constexpr std::string_view kSingle = "(){}[]<>,.:=*@";

constexpr std::array<std::string_view, 29> kKeywords = {
    "spec",     "end",     "logic",  "hlogic", "data",    "sort",    "sorts",  "op",
    "ops",      "pred",    "preds",  "prop",   "props",   "nominal", "nominals",
    "modality", "with",    "rigid",  "not",    "forall",  "exists",  "forallH",
    "existsH",  "worlds",  "relation", "carrier", "rel",  "in",      "World"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

Source::Source(std::string_view text, std::string file) : file_(std::move(file)) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines_.emplace_back(text.substr(start));
      break;
    }
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines_.emplace_back(line);
    start = nl + 1;
  }
}

std::string Source::line_text(int line) const {
  if (line < 1 || line > line_count()) return {};
  return lines_[static_cast<std::size_t>(line - 1)];
}

Diagnostic Source::diagnostic(int line, int column, std::string message, Severity severity) const {
  if (line_count() == 0) line = 1;
  line = std::clamp(line, 1, std::max(1, line_count()));
  int width = static_cast<int>(line_text(line).size());
  column = std::clamp(column, 1, width + 1);
  return Diagnostic{file_, line, column, severity, std::move(message), line_text(line)};
}

std::vector<Token> tokenize(const Source& src, std::string_view text, std::vector<Diagnostic>& out) {
  std::vector<Token> tokens;
  int line = 1;
  int col = 1;
  int last_line = 0;
  std::size_t i = 0;
  auto push = [&](Token::Kind kind, std::string t, int l, int c) {
    tokens.push_back(Token{kind, std::move(t), l, c, l != last_line});
    last_line = l;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (text.substr(i, 2) == "--") {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(Token::Kind::Ident, std::string(text.substr(i, j - i)), line, col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Token::Kind::Number, std::string(text.substr(i, j - i)), line, col);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    bool matched = false;
    for (auto sym : kSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        push(Token::Kind::Symbol, std::string(sym), line, col);
        col += static_cast<int>(sym.size());
        i += sym.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingle.find(c) != std::string_view::npos) {
      push(Token::Kind::Symbol, std::string(1, c), line, col);
      ++col;
      ++i;
      continue;
    }
    auto u = static_cast<unsigned char>(c);
    out.push_back(src.diagnostic(line, col,
                                 u < 0x80 ? fmt::format("unexpected character '{}'", c)
                                          : std::string("unexpected non-ASCII character")));
    // Skip a whole UTF-8 sequence at once.
    std::size_t len = 1;
    if (u >= 0xF0) len = 4;
    else if (u >= 0xE0) len = 3;
    else if (u >= 0xC0) len = 2;
    i += len;
    ++col;
  }
  tokens.push_back(Token{Token::Kind::End, "", line, col, true});
  return tokens;
}

Cursor::Cursor(std::string_view text, const ParseOptions& options)
    : src_(text, options.file_name), options_(options) {
  tokens_ = tokenize(src_, text, diags_);
  if (options_.first_error_only && diags_.size() > 1) diags_.resize(1);
}

const Token& Cursor::peek(std::size_t k) const {
  return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
}

const Token& Cursor::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Cursor::accept(std::string_view sym) {
  if (!peek().is(sym)) return false;
  next();
  return true;
}

const Token& Cursor::expect(std::string_view sym, std::string_view context) {
  if (!peek().is(sym))
    fail(peek(), fmt::format("expected '{}' {}, found {}", sym, context, describe(peek())));
  return next();
}

const Token& Cursor::expect_name(std::string_view what) {
  if (!peek().is_name() || (peek().kind == Token::Kind::Ident && is_keyword(peek().text)))
    fail(peek(), fmt::format("expected {}, found {}", what, describe(peek())));
  return next();
}

void Cursor::report(const Token& at, std::string message) { report(at.line, at.column, std::move(message)); }

void Cursor::report(int line, int column, std::string message) {
  if (options_.first_error_only && parser_reported_) throw Stop{};
  diags_.push_back(src_.diagnostic(line, column, std::move(message)));
  parser_reported_ = true;
  if (options_.first_error_only) throw Stop{};
}

std::vector<Diagnostic> Cursor::take_diagnostics() {
  std::vector<Diagnostic> out = std::move(diags_);
  diags_.clear();
  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.line, a.column) < std::pair(b.line, b.column);
  });
  if (options_.first_error_only && out.size() > 1) out.resize(1);
  return out;
}

void Cursor::fail(const Token& at, std::string message) {
  report(at, std::move(message));
  throw Abort{};
}

void Cursor::recover() {
  next();
  while (!at_end() && !peek().line_start) next();
}

std::string Cursor::describe(const Token& t) {
  if (t.kind == Token::Kind::End) return "end of input";
  return fmt::format("'{}'", t.text);
}

}  // namespace hyloc::detail
