#pragma once

// Access to the files under tests/data.

#include <memory>
#include <string>

#include "hyloc/kripke.hpp"
#include "hyloc/syntax.hpp"

namespace hyloc::testing {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

// The Nat + Calc listing and its Calc theory.
const SpecParseResult& calc_spec();
const HybridTheory& calc_theory();

// Loads tests/data/<name> over the Calc signature, failing loudly on
// diagnostics.
KripkeModel calc_model(const std::string& name);

}  // namespace hyloc::testing
