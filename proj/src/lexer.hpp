#pragma once

// Tokenizer shared by the specification, sentence and model readers.

#include <string>
#include <string_view>
#include <vector>

#include "hyloc/syntax.hpp"

namespace hyloc::detail {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
  bool line_start = false;  // first token on its line

  bool is(std::string_view sym) const {
    return (kind == Kind::Symbol || kind == Kind::Ident) && text == sym;
  }
  bool is_name() const { return kind == Kind::Ident || kind == Kind::Number; }
};

class Source {
 public:
  Source(std::string_view text, std::string file);

  const std::string& file() const { return file_; }
  std::string line_text(int line) const;
  int line_count() const { return static_cast<int>(lines_.size()); }

  Diagnostic diagnostic(int line, int column, std::string message,
                        Severity severity = Severity::Error) const;

 private:
  std::string file_;
  std::vector<std::string> lines_;
};

// Lexical errors are reported into `out`; offending characters are skipped.
// The result always ends with an End token.
std::vector<Token> tokenize(const Source& src, std::string_view text, std::vector<Diagnostic>& out);

bool is_keyword(std::string_view word);

// Unwinds to the nearest recovery point after a diagnostic has been recorded.
struct Abort {};
// Raised once the first diagnostic is recorded in first-error mode.
struct Stop {};

class Cursor {
 public:
  Cursor(std::string_view text, const ParseOptions& options);

  const Token& peek(std::size_t k = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept(std::string_view sym);
  const Token& expect(std::string_view sym, std::string_view context);
  const Token& expect_name(std::string_view what);

  void report(const Token& at, std::string message);
  void report(int line, int column, std::string message);
  [[noreturn]] void fail(const Token& at, std::string message);
  // Skips at least one token, then up to the next token starting a line.
  void recover();

  static std::string describe(const Token& t);

  const Source& source() const { return src_; }
  // Diagnostics in source order; a single one in first-error mode.
  std::vector<Diagnostic> take_diagnostics();
  std::size_t error_count() const { return diags_.size(); }

 private:
  Source src_;
  ParseOptions options_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
  // Lexical diagnostics are collected up front; first-error mode stops at
  // the first one raised while parsing and keeps the earliest overall.
  bool parser_reported_ = false;
};

}  // namespace hyloc::detail
