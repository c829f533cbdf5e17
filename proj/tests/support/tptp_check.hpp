#pragma once

// Standalone checker for the FOF fragment of the TPTP problem syntax. It
// shares no code with the emitter: it tokenizes and parses the text against
// the published grammar, and also checks that every annotated formula is
// closed and that each functor is used with one arity and in one role.

#include <string>
#include <string_view>
#include <vector>

namespace hyloc::testing {

struct TptpReport {
  std::vector<std::string> errors;
  int axioms = 0;
  int conjectures = 0;
  std::vector<std::string> names;

  bool ok() const { return errors.empty(); }
};

TptpReport check_tptp(std::string_view text);

}  // namespace hyloc::testing
