#pragma once

// Base institutions underneath the hybridization.
//
// Two instances are provided:
//   PROP  propositional atoms, models are valuations;
//   RFOL  many-sorted first-order atoms (equations and relational atoms) over
//         total functions and relations, every symbol carrying a rigidity flag.
//
// Sentences are atomic on purpose: connectives and quantifiers live at the
// hybrid level only. Models are finite (nonempty carriers, explicit tables).

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hyloc {

enum class BaseKind { Prop, Rfol };

std::string_view to_string(BaseKind kind);

struct SortDecl {
  std::string name;
  bool rigid = false;
  bool operator==(const SortDecl&) const = default;
};

struct OpDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  bool rigid = false;
  bool operator==(const OpDecl&) const = default;
};

struct RelDecl {
  std::string name;
  std::vector<std::string> args;
  bool rigid = false;
  bool operator==(const RelDecl&) const = default;
};

struct BaseSignature {
  BaseKind kind = BaseKind::Prop;
  std::set<std::string> atoms;             // PROP
  std::map<std::string, SortDecl> sorts;   // RFOL
  std::map<std::string, OpDecl> ops;       // RFOL
  std::map<std::string, RelDecl> rels;     // RFOL

  bool operator==(const BaseSignature&) const = default;

  const SortDecl* find_sort(std::string_view name) const;
  const OpDecl* find_op(std::string_view name) const;
  const RelDecl* find_rel(std::string_view name) const;
  bool has_atom(std::string_view name) const;
  // True when `name` is used by any symbol class.
  bool declares(std::string_view name) const;

  void add_sort(std::string name, bool rigid);
  void add_op(std::string name, std::vector<std::string> args, std::string result, bool rigid);
  void add_rel(std::string name, std::vector<std::string> args, bool rigid);
  void add_atom(std::string name);
};

// Invariant violations of a signature; empty when well-formed.
std::vector<std::string> validate(const BaseSignature& sig);

struct Term {
  enum class Kind { Var, App };
  Kind kind = Kind::App;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term app(std::string op, std::vector<Term> args = {});

  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Term&) const = default;
};

struct BaseSentence {
  enum class Kind { Prop, Equation, Relation };
  Kind kind = Kind::Prop;
  std::string symbol;        // atom or relation name; empty for equations
  std::vector<Term> args;    // equation: {lhs, rhs}

  static BaseSentence prop(std::string atom);
  static BaseSentence equation(Term lhs, Term rhs);
  static BaseSentence relation(std::string rel, std::vector<Term> args);

  bool operator==(const BaseSentence&) const = default;
};

// Sort assignment for variables occurring in base sentences.
using SortContext = std::map<std::string, std::string>;

// Returns the sort of `t`, throwing UnsortedTerm / UnboundVariable.
std::string sort_of(const BaseSignature& sig, const Term& t, const SortContext& vars);
// Throws when `s` is not well-sorted over `sig` under `vars`.
void check_sorted(const BaseSignature& sig, const BaseSentence& s, const SortContext& vars);
void collect_variables(const BaseSentence& s, std::set<std::string>& out);

struct BaseModel {
  std::map<std::string, bool> valuation;                         // PROP
  std::map<std::string, std::vector<std::string>> carriers;      // element names per sort
  std::map<std::string, std::vector<int>> ops;                   // row-major tables
  std::map<std::string, std::set<std::vector<int>>> rels;

  bool operator==(const BaseModel&) const = default;

  int carrier_size(const std::string& sort) const;
};

// Number of rows of an op table: product of the argument carrier sizes.
std::size_t table_rows(const BaseModel& m, const std::vector<std::string>& arg_sorts);
std::size_t table_index(const BaseModel& m, const std::vector<std::string>& arg_sorts,
                        const std::vector<int>& args);

// Problems with `m` as a model of `sig`; empty when it is a proper model.
std::vector<std::string> validate_model(const BaseSignature& sig, const BaseModel& m);

struct Value {
  std::string sort;
  int element = 0;
  bool operator==(const Value&) const = default;
};
using BaseEnv = std::map<std::string, Value>;

int evaluate(const BaseSignature& sig, const BaseModel& m, const Term& t, const BaseEnv& env);
bool base_satisfies(const BaseSignature& sig, const BaseModel& m, const BaseSentence& s,
                    const BaseEnv& env = {});

// Symbol renaming between base signatures. Source symbols absent from a map
// translate to the same name in the target; the target may declare extra
// symbols (extension morphisms).
struct SignatureMorphism {
  BaseSignature source;
  BaseSignature target;
  std::map<std::string, std::string> sort_map;
  std::map<std::string, std::string> op_map;
  std::map<std::string, std::string> rel_map;
  std::map<std::string, std::string> atom_map;

  static SignatureMorphism identity(const BaseSignature& sig);
  static SignatureMorphism inclusion(const BaseSignature& source, const BaseSignature& target);

  std::string map_sort(const std::string& s) const;
  std::string map_op(const std::string& op) const;
  std::string map_rel(const std::string& rel) const;
  std::string map_atom(const std::string& atom) const;
};

// Rank/rigidity preservation problems; empty when the morphism is valid.
std::vector<std::string> validate(const SignatureMorphism& phi);

Term translate_term(const SignatureMorphism& phi, const Term& t);
BaseSentence translate_sentence(const SignatureMorphism& phi, const BaseSentence& s);
BaseModel reduct_model(const SignatureMorphism& phi, const BaseModel& target_model);
// Translates a source environment into the target's sort names.
BaseEnv translate_env(const SignatureMorphism& phi, const BaseEnv& env);

// `first` then `second`.
SignatureMorphism compose(const SignatureMorphism& first, const SignatureMorphism& second);

}  // namespace hyloc
