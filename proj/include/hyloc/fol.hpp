#pragma once

// First-order logic: terms, formulas with full connectives and (optionally
// sorted) quantifiers, theories, and evaluation over finite structures.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hyloc::fol {

struct Term {
  enum class Kind { Var, App };
  Kind kind = Kind::App;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term app(std::string symbol, std::vector<Term> args = {});
  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Term&) const = default;
};

struct Formula {
  enum class Kind { True, False, Pred, Eq, Not, And, Or, Implies, Iff, Forall, Exists };
  Kind kind = Kind::True;
  std::string symbol;          // predicate name, or bound variable for quantifiers
  std::string sort;            // quantifier sort; empty in unsorted formulas
  std::vector<Term> terms;     // predicate / equation arguments
  std::vector<Formula> sub;

  static Formula truth();
  static Formula falsity();
  static Formula pred(std::string name, std::vector<Term> args);
  static Formula eq(Term a, Term b);
  static Formula negation(Formula f);
  // n-ary; a single operand is returned unchanged, none yields True/False.
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implication(Formula a, Formula b);
  static Formula equivalence(Formula a, Formula b);
  static Formula forall(std::string var, std::string sort, Formula body);
  static Formula exists(std::string var, std::string sort, Formula body);

  bool operator==(const Formula&) const = default;
};

std::set<std::string> free_variables(const Formula& f);

struct FunctionSymbol {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  bool operator==(const FunctionSymbol&) const = default;
};

struct PredicateSymbol {
  std::string name;
  std::vector<std::string> args;
  bool operator==(const PredicateSymbol&) const = default;
};

// Many-sorted when `sorts` is nonempty; otherwise a single implicit universe
// and every rank entry is the empty string (only arities matter).
struct Signature {
  std::vector<std::string> sorts;
  std::vector<FunctionSymbol> functions;
  std::vector<PredicateSymbol> predicates;

  bool unsorted() const { return sorts.empty(); }
  const FunctionSymbol* find_function(const std::string& name) const;
  const PredicateSymbol* find_predicate(const std::string& name) const;
};

struct Axiom {
  std::string label;  // provenance, e.g. "axiom 3" or "closure f_suc"
  Formula formula;
};

struct Theory {
  std::string name;
  Signature signature;
  std::vector<Axiom> axioms;
};

// Rank problems and free variables; empty when the theory is well-formed.
std::vector<std::string> validate(const Theory& th);

// Finite structure over the universe {0, ..., universe-1}. Function tables
// are row-major over universe^arity.
struct Structure {
  int universe = 0;
  std::map<std::string, std::vector<int>> sort_domains;   // many-sorted reading only
  std::map<std::string, int> function_arity;
  std::map<std::string, std::vector<int>> functions;
  std::map<std::string, std::set<std::vector<int>>> predicates;
};

using Assignment = std::map<std::string, int>;

int evaluate(const Structure& m, const Term& t, const Assignment& a);
// Sorted quantifiers range over sort_domains[sort], unsorted ones over the
// whole universe.
bool evaluate(const Structure& m, const Formula& f, Assignment& a);
bool evaluate(const Structure& m, const Formula& f);

// Human-readable rendering used by dumps and diagnostics.
std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string dump(const Theory& th);

}  // namespace hyloc::fol
