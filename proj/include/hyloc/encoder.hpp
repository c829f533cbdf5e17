#pragma once

// Encoding of constrained hybrid theories into first-order logic.
//
//   encode_signature  hybrid signature + frame constraints -> many-sorted theory
//                     (sort World, nominal constants, accessibility predicates,
//                     flexible symbols with an extra leading World argument)
//   encode_sentence   standard translation ST_w relative to a world term
//   unsort            many-sorted -> unsorted via sort predicates
//   emit_tptp         unsorted task -> TPTP FOF text
//   induced_fol_model Kripke model -> finite first-order structure whose
//                     reduct is the Kripke model again
//
// Symbol naming in the encoded theory:
//   is_<sort>   sort predicate (unsorted form only)
//   n_<nominal> world constant
//   r_<modality> accessibility predicate
//   f_<op>, p_<rel>, q_<atom>  base symbols
//   W<k>, K_<name>, V_<name>   world, nominal-bound and rigid variables

#include <optional>
#include <string>

#include "hyloc/fol.hpp"
#include "hyloc/hybrid.hpp"
#include "hyloc/kripke.hpp"

namespace hyloc {

std::string sort_predicate(const std::string& sort);
std::string nominal_constant(const std::string& nominal);
std::string modality_predicate(const std::string& modality);
std::string op_function(const std::string& op);
std::string rel_predicate(const std::string& rel);
std::string atom_predicate(const std::string& atom);

fol::Theory encode_signature(const HybridSignature& sig, const ConstraintSet& cs);

// ST_world(s). Throws UnboundName for nominals neither declared nor bound.
fol::Formula encode_sentence(const HybridSignature& sig, const Sentence& s, const fol::Term& world);
// Global satisfaction: forall W0:World. ST_W0(s).
fol::Formula encode_global(const HybridSignature& sig, const Sentence& s);

// Relativizes quantifiers to sort predicates.
fol::Formula relativize(const fol::Formula& f);
// Relativized axioms, then closure axioms for every function, then one
// nonemptiness axiom per sort.
fol::Theory unsort(const fol::Theory& th);

struct EncodedTask {
  std::string name;
  fol::Theory sorted;                       // translated premises plus frame axioms
  std::optional<fol::Formula> sorted_goal;  // goal translation only
  fol::Theory unsorted;
  std::optional<fol::Formula> unsorted_goal;
};

EncodedTask encode_task(const HybridTheory& theory, const std::optional<Sentence>& goal);

// TPTP FOF problem: `fof(ax_<n>, axiom, ...)` in theory order, then
// `fof(goal, conjecture, ...)` when the task has a goal.
// Throws UnsanitizableIdentifier for symbols outside the TPTP lexicon.
std::string emit_tptp(const EncodedTask& task);

// Universe: worlds first (world i is element i), then each sort's elements in
// signature order. Flexible sorts get as many elements as their largest
// per-world carrier.
fol::Structure induced_fol_model(const KripkeModel& model);

}  // namespace hyloc
