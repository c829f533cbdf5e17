#pragma once

// Random signatures, models, sentences and morphisms for property tests.
// Every generator is driven by an explicit std::mt19937 so failures reproduce
// from the printed seed.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hyloc/base_logic.hpp"
#include "hyloc/hybrid.hpp"
#include "hyloc/kripke.hpp"
#include "hyloc/syntax.hpp"

namespace hyloc::testing {

using Rng = std::mt19937;

int uniform(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

struct PropShape {
  int max_atoms = 3;
  int max_nominals = 2;
  int max_modalities = 2;
  int min_arity = 2;
  int max_arity = 3;
};

HybridSignature random_prop_signature(Rng& rng, const PropShape& shape = {});

// Small many-sorted base: a rigid sort, optionally a flexible sort, rigid and
// flexible ops and relations over them.
HybridSignature random_rfol_signature(Rng& rng);

// Random model over `sig` with 1..max_worlds worlds and carriers of size
// 1..max_carrier. Rigid symbols are shared across worlds.
KripkeModel random_model(Rng& rng, std::shared_ptr<const HybridSignature> sig, int max_worlds,
                         int max_carrier = 2);

struct SentenceShape {
  int max_depth = 4;
  bool nominal_quantifiers = true;
  bool rigid_quantifiers = true;
};

// Closed, well-formed sentence; bound names never shadow.
Sentence random_sentence(Rng& rng, const HybridSignature& sig, const SentenceShape& shape = {});

// Injective renaming of every symbol of `sig` into a fresh target signature,
// optionally extended with unused extra symbols.
HybridMorphism random_renaming(Rng& rng, const HybridSignature& sig);

// Well-formed spec file of hlogic blocks with random declarations and axioms.
SpecFile random_spec_file(Rng& rng);

}  // namespace hyloc::testing
