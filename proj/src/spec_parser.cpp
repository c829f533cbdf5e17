#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "hyloc/error.hpp"
#include "hyloc/syntax.hpp"
#include "lexer.hpp"

namespace hyloc {

using detail::Abort;
using detail::Cursor;
using detail::Stop;
using detail::Token;

std::string Diagnostic::to_string() const {
  return fmt::format("{}:{}:{}: {}: {}", file, line, column,
                     severity == Severity::Error ? "error" : "warning", message);
}

std::size_t SpecFile::axiom_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.axioms.size();
  return n;
}

bool SpecParseResult::ok() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(),
                      [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

const HybridTheory* SpecParseResult::theory(std::string_view name) const {
  for (const auto& t : theories)
    if (t.name == name) return &t;
  return nullptr;
}

namespace {

bool parse_logic_tag(const std::string& tag, bool hybrid, BaseKind& kind) {
  std::string base = tag;
  if (hybrid) {
    if (base.size() < 2 || base[0] != 'H') return false;
    base = base.substr(1);
    // A trailing C marks the constrained variant; the constraints themselves
    // come from the modality declarations.
    if (base != "PROP" && base.back() == 'C') base.pop_back();
  }
  if (base == "PROP") {
    kind = BaseKind::Prop;
    return true;
  }
  if (base == "RigidFOL" || base == "RigidCASL") {
    kind = BaseKind::Rfol;
    return true;
  }
  return false;
}

bool is_quantifier_word(const Token& t) {
  return t.kind == Token::Kind::Ident &&
         (t.text == "forall" || t.text == "exists" || t.text == "forallH" || t.text == "existsH");
}

class SentenceReader {
 public:
  explicit SentenceReader(Cursor& in) : in_(in) {}

  void set_signature(const HybridSignature* sig) { sig_ = sig; }

  Sentence formula() { return iff(); }

  // Runs the well-formedness checks, positioning each problem at the
  // innermost node recorded while parsing.
  void check(const Sentence& s, const Token& fallback) {
    for (const auto& d : check_wellformed(*sig_, s)) {
      auto [line, col] = position(s, d.path, fallback);
      in_.report(line, col, d.message);
    }
  }

  void reset() {
    scope_.clear();
    where_.clear();
  }

 private:
  struct Binding {
    std::string name;
    bool nominal = false;
  };

  Sentence mark(Sentence s, const Token& t) {
    where_.emplace(s.identity(), std::pair(t.line, t.column));
    return s;
  }

  std::pair<int, int> position(const Sentence& root, const std::string& path, const Token& fallback) const {
    std::pair<int, int> best{fallback.line, fallback.column};
    const Sentence* cur = &root;
    auto look = [&](const Sentence& s) {
      auto it = where_.find(s.identity());
      if (it != where_.end()) best = it->second;
    };
    look(*cur);
    std::stringstream ss(path);
    std::string part;
    std::getline(ss, part, '.');  // "root"
    while (std::getline(ss, part, '.')) {
      std::size_t i = std::stoul(part);
      if (i >= cur->args().size()) break;
      cur = &cur->arg(i);
      look(*cur);
    }
    return best;
  }

  const Binding* lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  Sentence iff() {
    Sentence a = implies();
    if (in_.peek().is("<=>")) {
      const Token& op = in_.next();
      Sentence b = iff();
      return mark(Sentence::equivalence(a, b), op);
    }
    return a;
  }

  Sentence implies() {
    Sentence a = disjunction();
    if (in_.peek().is("=>")) {
      const Token& op = in_.next();
      Sentence b = implies();
      return mark(Sentence::implication(a, b), op);
    }
    return a;
  }

  Sentence disjunction() {
    Sentence a = conjunction();
    while (in_.peek().is("\\/")) {
      const Token& op = in_.next();
      a = mark(Sentence::disjunction(a, conjunction()), op);
    }
    return a;
  }

  Sentence conjunction() {
    Sentence a = unary();
    while (in_.peek().is("/\\")) {
      const Token& op = in_.next();
      a = mark(Sentence::conjunction(a, unary()), op);
    }
    return a;
  }

  std::vector<Sentence> modal_arguments() {
    std::vector<Sentence> args;
    if (!in_.accept("(")) {
      args.push_back(unary());
      return args;
    }
    if (in_.accept(")")) return args;
    args.push_back(formula());
    while (in_.accept(",")) args.push_back(formula());
    in_.expect(")", "to close the modality arguments");
    return args;
  }

  Sentence unary() {
    const Token& t = in_.peek();
    if (t.is("not")) {
      in_.next();
      return mark(Sentence::negation(unary()), t);
    }
    if (t.is("<") || t.is("[")) {
      in_.next();
      bool diamond = t.is("<");
      const Token& m = in_.expect_name("a modality name");
      in_.expect(diamond ? ">" : "]", "after the modality name");
      auto args = modal_arguments();
      return mark(diamond ? Sentence::diamond(m.text, std::move(args))
                          : Sentence::box(m.text, std::move(args)),
                  t);
    }
    if (t.is("@")) {
      in_.next();
      const Token& n = in_.expect_name("a nominal after '@'");
      Sentence body = in_.accept(":") ? formula() : unary();
      return mark(Sentence::at(n.text, body), t);
    }
    if (is_quantifier_word(t)) return quantifier();
    if (t.is("(")) {
      in_.next();
      Sentence s = formula();
      in_.expect(")", "to close the parenthesis");
      return s;
    }
    return atom();
  }

  Sentence quantifier() {
    const Token& kw = in_.next();
    bool existential = kw.text == "exists" || kw.text == "existsH";
    std::vector<Token> names;
    names.push_back(in_.expect_name("a variable name"));
    while (in_.accept(",")) names.push_back(in_.expect_name("a variable name"));
    in_.expect(":", "before the quantified sort");
    const Token& sort = in_.peek();
    if (sort.kind != Token::Kind::Ident) in_.fail(sort, fmt::format("expected a sort, found {}", Cursor::describe(sort)));
    in_.next();
    in_.expect(".", "after the quantified sort");
    bool nominal = sort.text == kWorldSort;
    for (const auto& n : names) scope_.push_back(Binding{n.text, nominal});
    Sentence body = formula();
    scope_.resize(scope_.size() - names.size());
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      if (nominal)
        body = existential ? Sentence::exists_nominal(it->text, body)
                           : Sentence::forall_nominal(it->text, body);
      else
        body = existential ? Sentence::exists_rigid(it->text, sort.text, body)
                           : Sentence::forall_rigid(it->text, sort.text, body);
      body = mark(body, *it);
    }
    return body;
  }

  Sentence atom() {
    const Token& t = in_.peek();
    if (!t.is_name() || (t.kind == Token::Kind::Ident && detail::is_keyword(t.text)))
      in_.fail(t, fmt::format("expected a formula, found {}", Cursor::describe(t)));
    const BaseSignature& base = sig_->base;
    if (t.kind == Token::Kind::Ident) {
      const Binding* b = lookup(t.text);
      if ((b && b->nominal) || (!b && sig_->has_nominal(t.text))) {
        in_.next();
        return mark(Sentence::nominal(t.text), t);
      }
      if (!b && base.kind == BaseKind::Prop) {
        in_.next();
        if (!base.has_atom(t.text)) in_.fail(t, fmt::format("unknown symbol '{}'", t.text));
        return mark(Sentence::base(BaseSentence::prop(t.text)), t);
      }
      if (!b && base.find_rel(t.text)) {
        in_.next();
        std::vector<Term> args;
        if (in_.accept("(")) args = term_list();
        return mark(Sentence::base(BaseSentence::relation(t.text, std::move(args))), t);
      }
    }
    Term lhs = term();
    if (!in_.peek().is("=")) {
      in_.fail(in_.peek(), fmt::format("expected '=' after the term '{}', found {}", t.text,
                                       Cursor::describe(in_.peek())));
    }
    in_.next();
    Term rhs = term();
    return mark(Sentence::base(BaseSentence::equation(std::move(lhs), std::move(rhs))), t);
  }

  // After an opening parenthesis.
  std::vector<Term> term_list() {
    std::vector<Term> args;
    if (in_.accept(")")) return args;
    args.push_back(term());
    while (in_.accept(",")) args.push_back(term());
    in_.expect(")", "to close the argument list");
    return args;
  }

  Term term() {
    const Token& t = in_.peek();
    if (!t.is_name() || (t.kind == Token::Kind::Ident && detail::is_keyword(t.text)))
      in_.fail(t, fmt::format("expected a term, found {}", Cursor::describe(t)));
    in_.next();
    if (const Binding* b = lookup(t.text)) {
      if (b->nominal) in_.fail(t, fmt::format("nominal '{}' used as a term", t.text));
      if (in_.peek().is("(")) in_.fail(in_.peek(), fmt::format("variable '{}' applied to arguments", t.text));
      return Term::var(t.text);
    }
    if (!sig_->base.find_op(t.text)) {
      if (sig_->has_nominal(t.text)) in_.fail(t, fmt::format("nominal '{}' used as a term", t.text));
      in_.fail(t, fmt::format("unknown symbol '{}'", t.text));
    }
    std::vector<Term> args;
    if (in_.accept("(")) args = term_list();
    return Term::app(t.text, std::move(args));
  }

  Cursor& in_;
  const HybridSignature* sig_ = nullptr;
  std::vector<Binding> scope_;
  std::map<const void*, std::pair<int, int>> where_;
};

class SpecReader {
 public:
  SpecReader(std::string_view text, const ParseOptions& options)
      : in_(text, options), reader_(in_) {}

  SpecParseResult run() {
    SpecParseResult result;
    {
      try {
        while (!in_.at_end()) {
          if (in_.peek().is("spec")) {
            block(result);
            continue;
          }
          in_.report(in_.peek(), fmt::format("expected 'spec', found {}", Cursor::describe(in_.peek())));
          while (!in_.at_end() && !in_.peek().is("spec")) in_.next();
        }
      } catch (const Stop&) {
      }
    }
    result.diagnostics = in_.take_diagnostics();
    return result;
  }

 private:
  struct BlockState {
    SpecBlock block;
    HybridSignature sig;
    ConstraintSet constraints;
  };

  static bool starts_item(const Token& t) {
    static const char* words[] = {".",     "{",     "}",     "end",     "spec",     "data", "rigid",
                                  "sort",  "sorts", "op",    "ops",     "pred",     "preds", "prop",
                                  "props", "nominal", "nominals", "modality"};
    if (t.kind == Token::Kind::End) return true;
    for (auto w : words)
      if (t.is(w)) return true;
    return false;
  }

  void block(SpecParseResult& result) {
    const Token& kw = in_.next();
    std::size_t errors_before = in_.error_count();
    BlockState st;
    bool header_ok = false;
    try {
      const Token& name = in_.expect_name("a spec name");
      st.block.name = name.text;
      if (signatures_.count(name.text) || hybrid_.count(name.text))
        in_.report(name, fmt::format("duplicate spec '{}'", name.text));
      in_.expect("=", "after the spec name");
      const Token& logic = in_.peek();
      if (logic.is("hlogic")) st.block.hybrid = true;
      else if (!logic.is("logic"))
        in_.fail(logic, fmt::format("expected 'logic' or 'hlogic', found {}", Cursor::describe(logic)));
      in_.next();
      in_.expect(":", "after the logic keyword");
      const Token& tag = in_.expect_name("a logic name");
      st.block.logic = tag.text;
      if (!parse_logic_tag(tag.text, st.block.hybrid, st.sig.base.kind))
        in_.report(tag, fmt::format("unknown {} '{}'", st.block.hybrid ? "hybrid logic" : "logic", tag.text));
      header_ok = true;
    } catch (const Abort&) {
      in_.recover();
    }

    int depth = 0;
    while (true) {
      const Token& t = in_.peek();
      if (t.kind == Token::Kind::End) {
        in_.report(t, fmt::format("missing 'end' for spec '{}'", st.block.name));
        break;
      }
      if (t.is("end")) {
        in_.next();
        if (depth > 0) in_.report(t, "unclosed '{' before 'end'");
        break;
      }
      if (t.is("spec") && t.line_start) {
        in_.report(t, fmt::format("missing 'end' for spec '{}'", st.block.name));
        break;
      }
      try {
        if (t.is("{")) {
          in_.next();
          ++depth;
        } else if (t.is("}")) {
          in_.next();
          if (depth == 0) in_.report(t, "unmatched '}'");
          else --depth;
        } else if (t.is("data")) {
          data(st);
        } else if (t.is(".")) {
          axiom(st);
        } else if (starts_item(t)) {
          declaration(st);
        } else {
          in_.fail(t, fmt::format("unexpected {} in spec body", Cursor::describe(t)));
        }
      } catch (const Abort&) {
        in_.recover();
      }
    }

    if (header_ok && in_.error_count() == errors_before) {
      for (const auto& msg : validate(st.sig)) in_.report(kw, msg);
      for (const auto& msg : validate(st.sig, st.constraints)) in_.report(kw, msg);
    }
    if (st.block.hybrid) {
      result.theories.push_back(HybridTheory{st.block.name, st.sig, st.constraints, st.block.axioms});
      hybrid_[st.block.name] = st.sig;
    } else {
      signatures_[st.block.name] = st.sig.base;
    }
    result.file.blocks.push_back(std::move(st.block));
  }

  void data(BlockState& st) {
    in_.next();
    do {
      const Token& name = in_.expect_name("a spec name");
      st.block.imports.push_back(name.text);
      auto it = signatures_.find(name.text);
      if (it == signatures_.end()) {
        if (hybrid_.count(name.text))
          in_.report(name, fmt::format("data import '{}' must name a logic block, not an hlogic block", name.text));
        else
          in_.report(name, fmt::format("unknown spec '{}' in data import", name.text));
        continue;
      }
      merge(st, it->second, name);
    } while (in_.accept(","));
  }

  void merge(BlockState& st, const BaseSignature& from, const Token& at) {
    BaseSignature& into = st.sig.base;
    if (from.kind != into.kind) {
      in_.report(at, fmt::format("data import '{}' uses a different base logic", at.text));
      return;
    }
    auto clash = [&](const std::string& sym) {
      in_.report(at, fmt::format("name clash on import of '{}': '{}' is already declared", at.text, sym));
    };
    for (const auto& a : from.atoms) {
      if (declared(st, a)) clash(a);
      else into.add_atom(a);
    }
    for (const auto& [n, d] : from.sorts) {
      if (declared(st, n)) clash(n);
      else into.sorts[n] = d;
    }
    for (const auto& [n, d] : from.ops) {
      if (declared(st, n)) clash(n);
      else into.ops[n] = d;
    }
    for (const auto& [n, d] : from.rels) {
      if (declared(st, n)) clash(n);
      else into.rels[n] = d;
    }
  }

  static bool declared(const BlockState& st, const std::string& name) {
    return st.sig.has_nominal(name) || st.sig.modalities.count(name) || st.sig.base.declares(name);
  }

  // Reports and returns false when `t` cannot name a new symbol.
  bool fresh_name(const BlockState& st, const Token& t, bool numeric_ok = false) {
    if (t.kind == Token::Kind::Number && !numeric_ok) {
      in_.report(t, fmt::format("'{}' is not an identifier", t.text));
      return false;
    }
    if (t.text == kWorldSort) {
      in_.report(t, "'World' is reserved for the world sort");
      return false;
    }
    if (declared(st, t.text)) {
      in_.report(t, fmt::format("duplicate declaration of '{}'", t.text));
      return false;
    }
    return true;
  }

  std::vector<Token> name_list(std::string_view what) {
    std::vector<Token> names;
    names.push_back(in_.expect_name(what));
    while (in_.accept(",")) names.push_back(in_.expect_name(what));
    return names;
  }

  // Resolves a sort reference; reports unknown sorts.
  std::string sort_ref(const BlockState& st, bool rigid_symbol, const std::string& symbol) {
    const Token& t = in_.expect_name("a sort name");
    const SortDecl* d = st.sig.base.find_sort(t.text);
    if (!d) in_.report(t, fmt::format("unknown sort '{}'", t.text));
    else if (rigid_symbol && !d->rigid)
      in_.report(t, fmt::format("rigid symbol '{}' uses flexible sort '{}'", symbol, t.text));
    return t.text;
  }

  void require_rfol(const BlockState& st, const Token& t) {
    if (st.sig.base.kind != BaseKind::Rfol)
      in_.report(t, fmt::format("'{}' requires a first-order base logic", t.text));
  }

  void require_hybrid(const BlockState& st, const Token& t) {
    if (!st.block.hybrid) in_.report(t, fmt::format("'{}' is only allowed in hlogic blocks", t.text));
  }

  void declaration(BlockState& st) {
    const Token& first = in_.peek();
    bool rigid = in_.accept("rigid");
    const Token& kw = in_.next();
    if (rigid && !(kw.is("sort") || kw.is("sorts") || kw.is("op") || kw.is("ops") || kw.is("pred") ||
                   kw.is("preds")))
      in_.fail(kw, fmt::format("'rigid' cannot qualify {}", Cursor::describe(kw)));

    if (kw.is("sort") || kw.is("sorts")) {
      require_rfol(st, kw);
      for (const auto& n : name_list("a sort name")) {
        if (!fresh_name(st, n)) continue;
        st.sig.base.add_sort(n.text, rigid);
        st.block.sorts.push_back(SortDecl{n.text, rigid});
      }
    } else if (kw.is("op") || kw.is("ops")) {
      require_rfol(st, kw);
      auto names = name_list("an operation name");
      in_.expect(":", "before the operation type");
      std::string symbol = names.front().text;
      std::vector<std::string> sorts{sort_ref(st, rigid, symbol)};
      while (in_.accept("*")) sorts.push_back(sort_ref(st, rigid, symbol));
      std::string result;
      if (in_.accept("->")) {
        result = sort_ref(st, rigid, symbol);
      } else {
        if (sorts.size() > 1) in_.fail(in_.peek(), "expected '->' after the argument sorts");
        result = sorts.front();
        sorts.clear();
      }
      for (const auto& n : names) {
        if (!fresh_name(st, n, true)) continue;
        st.sig.base.add_op(n.text, sorts, result, rigid);
        st.block.ops.push_back(OpDecl{n.text, sorts, result, rigid});
      }
    } else if (kw.is("pred") || kw.is("preds")) {
      require_rfol(st, kw);
      auto names = name_list("a predicate name");
      std::vector<std::string> sorts;
      if (in_.accept(":")) {
        sorts.push_back(sort_ref(st, rigid, names.front().text));
        while (in_.accept("*")) sorts.push_back(sort_ref(st, rigid, names.front().text));
      }
      for (const auto& n : names) {
        if (!fresh_name(st, n)) continue;
        st.sig.base.add_rel(n.text, sorts, rigid);
        st.block.rels.push_back(RelDecl{n.text, sorts, rigid});
      }
    } else if (kw.is("prop") || kw.is("props")) {
      if (st.sig.base.kind != BaseKind::Prop)
        in_.report(kw, "'props' requires the propositional base logic; use a nullary 'pred' instead");
      for (const auto& n : name_list("a proposition name")) {
        if (!fresh_name(st, n)) continue;
        st.sig.base.add_atom(n.text);
        st.block.props.push_back(n.text);
      }
    } else if (kw.is("nominal") || kw.is("nominals")) {
      require_hybrid(st, kw);
      for (const auto& n : name_list("a nominal name")) {
        if (!fresh_name(st, n)) continue;
        st.sig.nominals.insert(n.text);
        st.block.nominals.push_back(n.text);
      }
    } else if (kw.is("modality")) {
      require_hybrid(st, kw);
      const Token& name = in_.expect_name("a modality name");
      in_.expect(":", "before the modality arity");
      const Token& arity = in_.peek();
      if (arity.kind != Token::Kind::Number)
        in_.fail(arity, fmt::format("expected the modality arity, found {}", Cursor::describe(arity)));
      in_.next();
      ModalityDecl decl{name.text, 0, {}};
      auto [ptr, ec] = std::from_chars(arity.text.data(), arity.text.data() + arity.text.size(), decl.arity);
      if (ec != std::errc{} || decl.arity > 64)
        in_.fail(arity, fmt::format("modality arity {} is out of range", arity.text));
      if (decl.arity < 2)
        in_.report(arity, fmt::format("modality '{}' has arity {}; a relation of width below 2 admits "
                                      "no successor argument",
                                      decl.name, decl.arity));
      if (in_.accept("with")) {
        do {
          const Token& p = in_.expect_name("a frame property");
          FrameProperty fp{};
          if (!parse_frame_property(p.text, fp)) {
            in_.report(p, fmt::format("unknown frame property '{}'", p.text));
            continue;
          }
          if (decl.arity != 2)
            in_.report(p, fmt::format("frame properties require a binary modality; '{}' has arity {}",
                                      decl.name, decl.arity));
          if (std::find(decl.properties.begin(), decl.properties.end(), fp) == decl.properties.end())
            decl.properties.push_back(fp);
        } while (in_.accept(","));
      }
      if (fresh_name(st, name)) {
        st.sig.modalities[decl.name] = decl.arity;
        if (!decl.properties.empty() && decl.arity == 2)
          st.constraints.frame[decl.name].insert(decl.properties.begin(), decl.properties.end());
        st.block.modalities.push_back(std::move(decl));
      }
    } else {
      in_.fail(first, fmt::format("unexpected {} in spec body", Cursor::describe(first)));
    }
  }

  void axiom(BlockState& st) {
    const Token& dot = in_.next();
    if (!st.block.hybrid) in_.report(dot, "axioms are only allowed in hlogic blocks");
    std::size_t before = in_.error_count();
    reader_.reset();
    reader_.set_signature(&st.sig);
    Sentence s = reader_.formula();
    if (!starts_item(in_.peek()))
      in_.fail(in_.peek(), fmt::format("unexpected {} after the axiom", Cursor::describe(in_.peek())));
    st.block.axioms.push_back(s);
    if (in_.error_count() == before) reader_.check(s, dot);
  }

  Cursor in_;
  SentenceReader reader_;
  std::map<std::string, BaseSignature> signatures_;
  std::map<std::string, HybridSignature> hybrid_;
};

}  // namespace

SpecParseResult parse_spec(std::string_view text, const ParseOptions& options) {
  return SpecReader(text, options).run();
}

SentenceParseResult parse_sentence(std::string_view text, const HybridSignature& sig,
                                   const ParseOptions& options) {
  SentenceParseResult result;
  Cursor in(text, options);
  if (in.error_count() == 0) {
    SentenceReader reader(in);
    reader.set_signature(&sig);
    try {
      const Token start = in.peek();
      Sentence s = reader.formula();
      if (!in.at_end())
        in.fail(in.peek(), fmt::format("unexpected {} after the sentence", Cursor::describe(in.peek())));
      reader.check(s, start);
      if (in.error_count() == 0) result.sentence = s;
    } catch (const Abort&) {
    } catch (const Stop&) {
    }
  }
  result.diagnostics = in.take_diagnostics();
  return result;
}

}  // namespace hyloc
