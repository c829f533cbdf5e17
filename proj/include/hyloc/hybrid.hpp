#pragma once

// Hybridized signatures (nominals, modalities, base signature), the hybrid
// sentence AST with its two quantifier families, renaming morphisms and
// theories.

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hyloc/base_logic.hpp"

namespace hyloc {

// Reserved sort name marking nominal-binding quantifiers in concrete syntax
// and naming the world sort in the first-order encoding.
inline constexpr const char* kWorldSort = "World";

struct HybridSignature {
  std::set<std::string> nominals;
  // Modality name -> tuple width of its accessibility relation (source world
  // included), so `modality shift : 2` is an ordinary binary relation whose
  // box/diamond take a single argument.
  std::map<std::string, int> modalities;
  BaseSignature base;

  bool operator==(const HybridSignature&) const = default;

  bool has_nominal(const std::string& n) const { return nominals.count(n) > 0; }
  int arity(const std::string& modality) const;  // 0 when undeclared
};

std::vector<std::string> validate(const HybridSignature& sig);

enum class FrameProperty { Reflexive, Symmetric, Transitive, Serial };

std::string_view to_string(FrameProperty p);
bool parse_frame_property(std::string_view text, FrameProperty& out);

// Frame properties requested per binary modality. Rigidity constraints are
// implied by the signature's flags and need no entry here.
struct ConstraintSet {
  std::map<std::string, std::set<FrameProperty>> frame;

  bool operator==(const ConstraintSet&) const = default;
  bool empty() const { return frame.empty(); }
};

std::vector<std::string> validate(const HybridSignature& sig, const ConstraintSet& cs);

enum class Connective {
  Base,
  Nominal,
  Not,
  And,
  Or,
  Implies,
  Box,
  Diamond,
  At,
  ForallNom,
  ExistsNom,
  ForallRigid,
  ExistsRigid,
};

// Immutable hybrid sentence. Copies share structure.
class Sentence {
 public:
  struct Node;

  static Sentence base(BaseSentence atom);
  static Sentence nominal(std::string name);
  static Sentence negation(Sentence s);
  static Sentence conjunction(Sentence a, Sentence b);
  static Sentence disjunction(Sentence a, Sentence b);
  static Sentence implication(Sentence a, Sentence b);
  // a <=> b, expanded to (a => b) /\ (b => a).
  static Sentence equivalence(Sentence a, Sentence b);
  static Sentence box(std::string modality, std::vector<Sentence> args);
  static Sentence diamond(std::string modality, std::vector<Sentence> args);
  static Sentence at(std::string nominal, Sentence body);
  static Sentence forall_nominal(std::string name, Sentence body);
  static Sentence exists_nominal(std::string name, Sentence body);
  static Sentence forall_rigid(std::string var, std::string sort, Sentence body);
  static Sentence exists_rigid(std::string var, std::string sort, Sentence body);

  Connective kind() const;
  // Nominal name, modality, retrieval target or bound name depending on kind.
  const std::string& name() const;
  // Sort of a rigid quantifier.
  const std::string& sort() const;
  const BaseSentence& atom() const;
  std::span<const Sentence> args() const;
  const Sentence& arg(std::size_t i) const { return args()[i]; }

  std::size_t size() const;  // AST node count
  std::size_t depth() const;

  bool is_quantifier() const;
  bool binds_nominal() const;

  // Address of the shared node; equal for copies of the same sentence.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Sentence& a, const Sentence& b);

 private:
  explicit Sentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Sentence::Node {
  Connective kind;
  std::string name;
  std::string sort;
  BaseSentence atom;
  std::vector<Sentence> args;
};

// A problem found by check_wellformed. `path` locates the offending node from
// the root, e.g. "root.1.0" is the first argument of the root's second child.
struct SentenceDiagnostic {
  std::string path;
  std::string message;
};

std::vector<SentenceDiagnostic> check_wellformed(const HybridSignature& sig, const Sentence& s);

struct FreeNames {
  std::set<std::string> nominals;
  std::set<std::string> variables;
  bool operator==(const FreeNames&) const = default;
};

FreeNames free_names(const Sentence& s);
// Every name bound anywhere in `s`.
std::set<std::string> bound_names(const Sentence& s);

struct HybridMorphism {
  HybridSignature source;
  HybridSignature target;
  std::map<std::string, std::string> nominal_map;
  std::map<std::string, std::string> modality_map;
  SignatureMorphism base;

  static HybridMorphism identity(const HybridSignature& sig);
  static HybridMorphism inclusion(const HybridSignature& source, const HybridSignature& target);

  std::string map_nominal(const std::string& n) const;
  std::string map_modality(const std::string& m) const;
};

std::vector<std::string> validate(const HybridMorphism& phi);

// Renames every symbol along `phi`. Binders whose names would capture a
// translated free name (or collide with a target symbol) are alpha-renamed.
Sentence translate_hybrid(const HybridMorphism& phi, const Sentence& s);

struct HybridTheory {
  std::string name;
  HybridSignature signature;
  ConstraintSet constraints;
  std::vector<Sentence> axioms;
};

}  // namespace hyloc
