#include "hyloc/fol.hpp"

#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace hyloc::fol {

Term Term::var(std::string name) { return Term{Kind::Var, std::move(name), {}}; }
Term Term::app(std::string symbol, std::vector<Term> args) {
  return Term{Kind::App, std::move(symbol), std::move(args)};
}

Formula Formula::truth() { return Formula{Kind::True, {}, {}, {}, {}}; }
Formula Formula::falsity() { return Formula{Kind::False, {}, {}, {}, {}}; }

Formula Formula::pred(std::string name, std::vector<Term> args) {
  return Formula{Kind::Pred, std::move(name), {}, std::move(args), {}};
}

Formula Formula::eq(Term a, Term b) {
  return Formula{Kind::Eq, {}, {}, {std::move(a), std::move(b)}, {}};
}

Formula Formula::negation(Formula f) { return Formula{Kind::Not, {}, {}, {}, {std::move(f)}}; }

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.empty()) return truth();
  if (fs.size() == 1) return std::move(fs.front());
  return Formula{Kind::And, {}, {}, {}, std::move(fs)};
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.empty()) return falsity();
  if (fs.size() == 1) return std::move(fs.front());
  return Formula{Kind::Or, {}, {}, {}, std::move(fs)};
}

Formula Formula::implication(Formula a, Formula b) {
  return Formula{Kind::Implies, {}, {}, {}, {std::move(a), std::move(b)}};
}

Formula Formula::equivalence(Formula a, Formula b) {
  return Formula{Kind::Iff, {}, {}, {}, {std::move(a), std::move(b)}};
}

Formula Formula::forall(std::string var, std::string sort, Formula body) {
  return Formula{Kind::Forall, std::move(var), std::move(sort), {}, {std::move(body)}};
}

Formula Formula::exists(std::string var, std::string sort, Formula body) {
  return Formula{Kind::Exists, std::move(var), std::move(sort), {}, {std::move(body)}};
}

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) term_vars(a, out);
}

void formula_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::Pred:
    case Formula::Kind::Eq: {
      std::set<std::string> vs;
      for (const auto& t : f.terms) term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool fresh = bound.insert(f.symbol).second;
      formula_vars(f.sub[0], bound, out);
      if (fresh) bound.erase(f.symbol);
      return;
    }
    default:
      for (const auto& s : f.sub) formula_vars(s, bound, out);
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  formula_vars(f, bound, out);
  return out;
}

const FunctionSymbol* Signature::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const PredicateSymbol* Signature::find_predicate(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

class RankChecker {
 public:
  RankChecker(const Signature& sig, std::vector<std::string>& out) : sig_(sig), out_(out) {}

  // Returns the sort of `t` ("" when unsorted or unknown).
  std::string term(const Term& t, const std::map<std::string, std::string>& vars) {
    if (t.is_var()) {
      auto it = vars.find(t.name);
      if (it == vars.end()) {
        out_.push_back(fmt::format("free variable {}", t.name));
        return {};
      }
      return it->second;
    }
    const FunctionSymbol* f = sig_.find_function(t.name);
    if (!f) {
      out_.push_back(fmt::format("undeclared function {}", t.name));
      return {};
    }
    if (f->args.size() != t.args.size()) {
      out_.push_back(fmt::format("function {} applied to {} argument(s)", t.name, t.args.size()));
      return {};
    }
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      auto s = term(t.args[i], vars);
      if (!sig_.unsorted() && s != f->args[i])
        out_.push_back(fmt::format("argument {} of {} has sort {}", i + 1, t.name, s));
    }
    return f->result;
  }

  void formula(const Formula& f, std::map<std::string, std::string>& vars) {
    switch (f.kind) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return;
      case Formula::Kind::Pred: {
        const PredicateSymbol* p = sig_.find_predicate(f.symbol);
        if (!p) {
          out_.push_back(fmt::format("undeclared predicate {}", f.symbol));
          return;
        }
        if (p->args.size() != f.terms.size()) {
          out_.push_back(fmt::format("predicate {} applied to {} argument(s)", f.symbol, f.terms.size()));
          return;
        }
        for (std::size_t i = 0; i < f.terms.size(); ++i) {
          auto s = term(f.terms[i], vars);
          if (!sig_.unsorted() && s != p->args[i])
            out_.push_back(fmt::format("argument {} of {} has sort {}", i + 1, f.symbol, s));
        }
        return;
      }
      case Formula::Kind::Eq: {
        auto a = term(f.terms[0], vars);
        auto b = term(f.terms[1], vars);
        if (a != b) out_.push_back(fmt::format("equation between sorts {} and {}", a, b));
        return;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        if (sig_.unsorted() != f.sort.empty())
          out_.push_back(fmt::format("quantifier over {} does not match the signature", f.symbol));
        auto saved = vars.find(f.symbol) != vars.end() ? std::optional(vars[f.symbol]) : std::nullopt;
        vars[f.symbol] = f.sort;
        formula(f.sub[0], vars);
        if (saved) vars[f.symbol] = *saved; else vars.erase(f.symbol);
        return;
      }
      default:
        for (const auto& s : f.sub) formula(s, vars);
    }
  }

 private:
  const Signature& sig_;
  std::vector<std::string>& out_;
};

}  // namespace

std::vector<std::string> validate(const Theory& th) {
  std::vector<std::string> out;
  RankChecker rc(th.signature, out);
  for (const auto& ax : th.axioms) {
    std::map<std::string, std::string> vars;
    rc.formula(ax.formula, vars);
  }
  return out;
}

int evaluate(const Structure& m, const Term& t, const Assignment& a) {
  if (t.is_var()) {
    auto it = a.find(t.name);
    if (it == a.end()) throw std::out_of_range("unassigned variable " + t.name);
    return it->second;
  }
  std::size_t idx = 0;
  for (const auto& arg : t.args)
    idx = idx * static_cast<std::size_t>(m.universe) + static_cast<std::size_t>(evaluate(m, arg, a));
  return m.functions.at(t.name).at(idx);
}

bool evaluate(const Structure& m, const Formula& f, Assignment& a) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Pred: {
      std::vector<int> tuple;
      tuple.reserve(f.terms.size());
      for (const auto& t : f.terms) tuple.push_back(evaluate(m, t, a));
      auto it = m.predicates.find(f.symbol);
      return it != m.predicates.end() && it->second.count(tuple) > 0;
    }
    case K::Eq: return evaluate(m, f.terms[0], a) == evaluate(m, f.terms[1], a);
    case K::Not: return !evaluate(m, f.sub[0], a);
    case K::And:
      for (const auto& s : f.sub)
        if (!evaluate(m, s, a)) return false;
      return true;
    case K::Or:
      for (const auto& s : f.sub)
        if (evaluate(m, s, a)) return true;
      return false;
    case K::Implies: return !evaluate(m, f.sub[0], a) || evaluate(m, f.sub[1], a);
    case K::Iff: return evaluate(m, f.sub[0], a) == evaluate(m, f.sub[1], a);
    case K::Forall:
    case K::Exists: {
      const bool universal = f.kind == K::Forall;
      std::vector<int> domain;
      if (f.sort.empty()) {
        for (int e = 0; e < m.universe; ++e) domain.push_back(e);
      } else {
        domain = m.sort_domains.at(f.sort);
      }
      auto it = a.find(f.symbol);
      auto saved = it != a.end() ? std::optional<int>(it->second) : std::nullopt;
      bool result = universal;
      for (int e : domain) {
        a[f.symbol] = e;
        if (evaluate(m, f.sub[0], a) != universal) {
          result = !universal;
          break;
        }
      }
      if (saved) a[f.symbol] = *saved; else a.erase(f.symbol);
      return result;
    }
  }
  return false;
}

bool evaluate(const Structure& m, const Formula& f) {
  Assignment a;
  return evaluate(m, f, a);
}

std::string to_string(const Term& t) {
  if (t.is_var() || t.args.empty()) return t.name;
  std::vector<std::string> args;
  for (const auto& a : t.args) args.push_back(to_string(a));
  return fmt::format("{}({})", t.name, fmt::join(args, ", "));
}

std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  auto joined = [&](std::string_view op) {
    std::vector<std::string> parts;
    for (const auto& s : f.sub) parts.push_back(to_string(s));
    return fmt::format("({})", fmt::join(parts, fmt::format(" {} ", op)));
  };
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Pred: {
      if (f.terms.empty()) return f.symbol;
      std::vector<std::string> args;
      for (const auto& a : f.terms) args.push_back(to_string(a));
      return fmt::format("{}({})", f.symbol, fmt::join(args, ", "));
    }
    case K::Eq: return fmt::format("{} = {}", to_string(f.terms[0]), to_string(f.terms[1]));
    case K::Not: return fmt::format("~{}", to_string(f.sub[0]));
    case K::And: return joined("&");
    case K::Or: return joined("|");
    case K::Implies: return joined("=>");
    case K::Iff: return joined("<=>");
    case K::Forall:
    case K::Exists: {
      auto q = f.kind == K::Forall ? "forall" : "exists";
      if (f.sort.empty()) return fmt::format("({} {}. {})", q, f.symbol, to_string(f.sub[0]));
      return fmt::format("({} {}:{}. {})", q, f.symbol, f.sort, to_string(f.sub[0]));
    }
  }
  return "?";
}

std::string dump(const Theory& th) {
  std::ostringstream os;
  os << "theory " << th.name << (th.signature.unsorted() ? " (unsorted)" : " (many-sorted)") << "\n";
  if (!th.signature.sorts.empty()) os << "sorts " << fmt::format("{}", fmt::join(th.signature.sorts, ", ")) << "\n";
  for (const auto& f : th.signature.functions) {
    if (th.signature.unsorted())
      os << "function " << f.name << " / " << f.args.size() << "\n";
    else if (f.args.empty())
      os << "function " << f.name << " : " << f.result << "\n";
    else
      os << "function " << f.name << " : " << fmt::format("{}", fmt::join(f.args, " * ")) << " -> "
         << f.result << "\n";
  }
  for (const auto& p : th.signature.predicates) {
    if (th.signature.unsorted())
      os << "predicate " << p.name << " / " << p.args.size() << "\n";
    else
      os << "predicate " << p.name << " : " << fmt::format("{}", fmt::join(p.args, " * ")) << "\n";
  }
  for (const auto& ax : th.axioms) os << "axiom [" << ax.label << "] " << to_string(ax.formula) << "\n";
  return os.str();
}

}  // namespace hyloc::fol
