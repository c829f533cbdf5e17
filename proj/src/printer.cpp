#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hyloc/syntax.hpp"

namespace hyloc {

namespace {

// Binding strength; operands weaker than their context get parentheses.
enum Level { kQuantifier = 0, kImplies = 1, kOr = 2, kAnd = 3, kPrefix = 4, kAtom = 5 };

Level level(const Sentence& s) {
  switch (s.kind()) {
    case Connective::Base:
    case Connective::Nominal:
      return kAtom;
    case Connective::Not:
    case Connective::Box:
    case Connective::Diamond:
      return kPrefix;
    case Connective::At:
      return level(s.arg(0)) == kAtom ? kPrefix : kQuantifier;
    case Connective::And:
      return kAnd;
    case Connective::Or:
      return kOr;
    case Connective::Implies:
      return kImplies;
    default:
      return kQuantifier;
  }
}

std::string base_atom(const BaseSentence& a) {
  switch (a.kind) {
    case BaseSentence::Kind::Prop:
      return a.symbol;
    case BaseSentence::Kind::Equation:
      return fmt::format("{} = {}", print_term(a.args[0]), print_term(a.args[1]));
    case BaseSentence::Kind::Relation: {
      if (a.args.empty()) return a.symbol;
      std::vector<std::string> args;
      for (const auto& t : a.args) args.push_back(print_term(t));
      return fmt::format("{}({})", a.symbol, fmt::join(args, ", "));
    }
  }
  return {};
}

std::string print(const Sentence& s, Level context);

std::string modal(const Sentence& s, std::string_view open, std::string_view close) {
  std::string head = fmt::format("{}{}{}", open, s.name(), close);
  if (s.args().size() == 1) return fmt::format("{} {}", head, print(s.arg(0), kPrefix));
  std::vector<std::string> args;
  for (const auto& a : s.args()) args.push_back(print(a, kQuantifier));
  return fmt::format("{}({})", head, fmt::join(args, ", "));
}

std::string print_bare(const Sentence& s) {
  switch (s.kind()) {
    case Connective::Base:
      return base_atom(s.atom());
    case Connective::Nominal:
      return s.name();
    case Connective::Not:
      return "not " + print(s.arg(0), kPrefix);
    case Connective::And:
      return fmt::format("{} /\\ {}", print(s.arg(0), kAnd), print(s.arg(1), kPrefix));
    case Connective::Or:
      return fmt::format("{} \\/ {}", print(s.arg(0), kOr), print(s.arg(1), kAnd));
    case Connective::Implies:
      return fmt::format("{} => {}", print(s.arg(0), kOr), print(s.arg(1), kImplies));
    case Connective::Box:
      return modal(s, "[", "]");
    case Connective::Diamond:
      return modal(s, "<", ">");
    case Connective::At:
      if (level(s) == kPrefix) return fmt::format("@ {} {}", s.name(), print(s.arg(0), kPrefix));
      return fmt::format("@ {} : {}", s.name(), print(s.arg(0), kQuantifier));
    case Connective::ForallNom:
      return fmt::format("forall {} : {} . {}", s.name(), kWorldSort, print(s.arg(0), kQuantifier));
    case Connective::ExistsNom:
      return fmt::format("exists {} : {} . {}", s.name(), kWorldSort, print(s.arg(0), kQuantifier));
    case Connective::ForallRigid:
      return fmt::format("forall {} : {} . {}", s.name(), s.sort(), print(s.arg(0), kQuantifier));
    case Connective::ExistsRigid:
      return fmt::format("exists {} : {} . {}", s.name(), s.sort(), print(s.arg(0), kQuantifier));
  }
  return {};
}

std::string print(const Sentence& s, Level context) {
  std::string body = print_bare(s);
  return level(s) < context ? "(" + body + ")" : body;
}

std::string sort_list(const std::vector<std::string>& sorts) {
  return fmt::format("{}", fmt::join(sorts, " * "));
}

}  // namespace

std::string print_term(const Term& t) {
  if (t.is_var() || t.args.empty()) return t.name;
  std::vector<std::string> args;
  for (const auto& a : t.args) args.push_back(print_term(a));
  return fmt::format("{}({})", t.name, fmt::join(args, ", "));
}

std::string print_sentence(const Sentence& s) { return print(s, kQuantifier); }

std::string print_spec(const SpecFile& file) {
  std::ostringstream os;
  bool first = true;
  for (const auto& b : file.blocks) {
    if (!first) os << "\n";
    first = false;
    os << "spec " << b.name << " =\n";
    os << "  " << (b.hybrid ? "hlogic" : "logic") << " : " << b.logic << "\n";
    for (const auto& i : b.imports) os << "  data " << i << "\n";
    auto rigid = [](bool r) { return r ? "rigid " : ""; };
    for (const auto& s : b.sorts) os << "  " << rigid(s.rigid) << "sort " << s.name << "\n";
    for (const auto& o : b.ops) {
      os << "  " << rigid(o.rigid) << "op " << o.name << " : ";
      if (!o.args.empty()) os << sort_list(o.args) << " -> ";
      os << o.result << "\n";
    }
    for (const auto& r : b.rels) {
      os << "  " << rigid(r.rigid) << "pred " << r.name;
      if (!r.args.empty()) os << " : " << sort_list(r.args);
      os << "\n";
    }
    if (!b.props.empty()) os << "  props " << fmt::format("{}", fmt::join(b.props, ", ")) << "\n";
    if (!b.nominals.empty()) os << "  nominals " << fmt::format("{}", fmt::join(b.nominals, ", ")) << "\n";
    for (const auto& m : b.modalities) {
      os << "  modality " << m.name << " : " << m.arity;
      if (!m.properties.empty()) {
        std::vector<std::string_view> props;
        for (auto p : m.properties) props.push_back(to_string(p));
        os << " with " << fmt::format("{}", fmt::join(props, ", "));
      }
      os << "\n";
    }
    for (const auto& a : b.axioms) os << "  . " << print_sentence(a) << "\n";
    os << "end\n";
  }
  return os.str();
}

}  // namespace hyloc
