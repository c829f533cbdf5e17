#pragma once

// Concrete syntax: `.hspec` specification files, `.hmodel` Kripke model files,
// and hybrid sentences on their own (command-line goals).
//
// Specification files are a sequence of blocks
//
//   spec Nat =
//    logic : RigidCASL
//    rigid sort Nat
//    rigid op 0 : Nat
//    rigid op suc : Nat -> Nat
//    op X : Nat * Nat -> Nat
//   end
//
//   spec Calc =
//     hlogic : HRigidCASLC
//     data Nat
//     {
//     nominals mult, sum
//     modality shift : 2
//     . mult \/ sum
//     . @ sum : <shift> mult /\ [shift] mult
//     }
//   end
//
// Formulas: `not` binds tightest, then `/\`, `\/`, `=>` (right associative)
// and `<=>`. `<m> f`, `[m] f` and `@ n f` are prefix operators at the level of
// `not`; n-ary modalities take `<m>(f1, f2)`. `@ n : f` and the quantifiers
// `forall`/`exists`/`forallH`/`existsH x, y : Sort . f` extend as far right
// as possible. Quantifying over the reserved sort `World` binds nominals.
// `--` starts a comment.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyloc/hybrid.hpp"
#include "hyloc/kripke.hpp"

namespace hyloc {

enum class Severity { Error, Warning };

struct Diagnostic {
  std::string file;
  int line = 1;
  int column = 1;
  Severity severity = Severity::Error;
  std::string message;
  std::string excerpt;  // the offending source line

  // "file:line:col: error: message"
  std::string to_string() const;
};

struct ParseOptions {
  std::string file_name = "<input>";
  bool first_error_only = false;
};

struct ModalityDecl {
  std::string name;
  int arity = 2;
  std::vector<FrameProperty> properties;
  bool operator==(const ModalityDecl&) const = default;
};

struct SpecBlock {
  std::string name;
  bool hybrid = false;       // `hlogic` rather than `logic`
  std::string logic;         // tag as written, e.g. "RigidCASL" or "HRigidCASLC"
  std::vector<std::string> imports;
  std::vector<SortDecl> sorts;
  std::vector<OpDecl> ops;
  std::vector<RelDecl> rels;
  std::vector<std::string> props;
  std::vector<std::string> nominals;
  std::vector<ModalityDecl> modalities;
  std::vector<Sentence> axioms;

  bool operator==(const SpecBlock&) const = default;
};

struct SpecFile {
  std::vector<SpecBlock> blocks;
  bool operator==(const SpecFile&) const = default;

  std::size_t axiom_count() const;
};

struct SpecParseResult {
  SpecFile file;
  std::vector<HybridTheory> theories;  // one per hlogic block, in order
  std::vector<Diagnostic> diagnostics;

  bool ok() const;
  const HybridTheory* theory(std::string_view name) const;
};

SpecParseResult parse_spec(std::string_view text, const ParseOptions& options = {});
std::string print_spec(const SpecFile& file);

struct SentenceParseResult {
  std::optional<Sentence> sentence;
  std::vector<Diagnostic> diagnostics;
};

// Parses and checks a closed sentence over `sig`.
SentenceParseResult parse_sentence(std::string_view text, const HybridSignature& sig,
                                   const ParseOptions& options = {});
std::string print_sentence(const Sentence& s);
std::string print_term(const Term& t);

struct ModelParseResult {
  std::optional<KripkeModel> model;
  std::vector<Diagnostic> diagnostics;  // structural problems
  std::vector<Violation> violations;    // rigidity sharing failures of a loaded model

  bool ok() const { return model && diagnostics.empty() && violations.empty(); }
};

ModelParseResult parse_model(std::string_view text, std::shared_ptr<const HybridSignature> sig,
                             const ParseOptions& options = {});
std::string print_model(const KripkeModel& model);

}  // namespace hyloc
