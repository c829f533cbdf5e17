#pragma once

// Finite constrained Kripke models and the local/global satisfaction relation.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyloc/base_logic.hpp"
#include "hyloc/hybrid.hpp"

namespace hyloc {

using WorldTuple = std::vector<int>;

struct KripkeModel {
  std::shared_ptr<const HybridSignature> signature;
  std::vector<std::string> worlds;
  // Accessibility tuples (source world first), indexed by world position.
  std::map<std::string, std::set<WorldTuple>> relations;
  std::map<std::string, int> nominal_at;
  // Base model at each world, parallel to `worlds`.
  std::vector<BaseModel> local;

  int world_count() const { return static_cast<int>(worlds.size()); }
  int world_index(const std::string& name) const;  // -1 when unknown
  const std::set<WorldTuple>& relation(const std::string& modality) const;
};

// Structural problems: tuple widths, world ranges, nominal totality, local
// models not fitting the base signature. Independent of constraints.
std::vector<std::string> check_structure(const KripkeModel& model);

struct Violation {
  std::string message;
};

// Rigidity sharing plus the requested frame properties. Each violation names
// a witness (worlds or tuple).
std::vector<Violation> check_constraints(const KripkeModel& model, const ConstraintSet& cs);

// Nominal variables bound to worlds and rigid variables bound to elements of
// the shared rigid carriers.
struct Environment {
  std::map<std::string, int> nominals;
  BaseEnv rigid;
};

bool sat_local(const KripkeModel& model, int world, const Sentence& s, const Environment& env = {});
bool sat_global(const KripkeModel& model, const Sentence& s);

// World where `s` fails first, or nullopt if it holds globally.
std::optional<int> first_failing_world(const KripkeModel& model, const Sentence& s);

struct Witness {
  int world = 0;          // world at which the axiom fails globally
  int focus = 0;          // world reached after following retrievals into the failure
  std::vector<std::pair<std::string, std::string>> bindings;  // name -> world/element name
};

struct AxiomResult {
  std::size_t index = 0;  // 0-based position in the theory
  bool holds = true;
  std::optional<Witness> witness;
};

struct TheoryReport {
  std::vector<Violation> violations;  // constraint check run first
  std::vector<AxiomResult> axioms;

  bool all_hold() const;
};

// Throws SignatureMismatch when the model is over another signature.
TheoryReport check_theory(const KripkeModel& model, const HybridTheory& theory);

// Explains why `s` is false at `world`, descending through retrievals,
// universal binders and failing conjuncts.
Witness explain_failure(const KripkeModel& model, int world, const Sentence& s);

// Model reduct along a hybrid morphism: same frame, relations and nominals
// read through the renaming, local models reduced along the base morphism.
KripkeModel reduct(const HybridMorphism& phi, const KripkeModel& target_model);

}  // namespace hyloc
