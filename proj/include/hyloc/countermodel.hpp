#pragma once

// Bounded countermodel search: enumerate constrained Kripke models up to a
// world count and carrier size, looking for one that satisfies all premises
// globally and falsifies the goal at some world.
//
// Enumeration order is fixed: increasing world count; then carrier sizes,
// with flexible carriers varying fastest and rigid carriers grown last; then
// a lexicographic sweep over relation tuples, nominal assignments, valuations
// and operation/relation tables. The first hit in that order is reported.
//
// find_countermodel evaluates candidates with OpenMP and still returns the
// first hit in enumeration order; find_countermodel_reference is the serial
// implementation it is tested against.

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>

#include "hyloc/hybrid.hpp"
#include "hyloc/kripke.hpp"

namespace hyloc {

struct SearchBounds {
  int max_worlds = 2;
  int max_carrier = 1;
  // Total candidate models allowed before the search refuses to start.
  double max_candidates = 5e7;
  // Polled between blocks of candidates; once true the search gives up and
  // reports no countermodel.
  const std::atomic<bool>* cancel = nullptr;
};

struct Countermodel {
  KripkeModel model;
  int world = 0;                 // a world falsifying the goal
  std::uint64_t examined = 0;    // candidates up to and including the hit
};

// Number of candidate models the bounds describe (saturates to infinity).
double search_space_size(const HybridSignature& sig, const SearchBounds& bounds);

// Throws BoundsTooLarge when the space exceeds bounds.max_candidates,
// std::invalid_argument for bounds below 1, Error for ill-formed or open input.
std::optional<Countermodel> find_countermodel(const HybridSignature& sig, const ConstraintSet& cs,
                                              std::span<const Sentence> premises,
                                              const Sentence& goal, const SearchBounds& bounds);

std::optional<Countermodel> find_countermodel_reference(const HybridSignature& sig,
                                                        const ConstraintSet& cs,
                                                        std::span<const Sentence> premises,
                                                        const Sentence& goal,
                                                        const SearchBounds& bounds);

}  // namespace hyloc
