#pragma once

// Reference semantics written directly from the satisfaction clauses, without
// the library's evaluator. Box is disjunctive over argument positions and
// Diamond conjunctive.

#include <map>
#include <string>
#include <utility>

#include "hyloc/kripke.hpp"

namespace hyloc::testing {

struct OracleEnv {
  std::map<std::string, int> nominals;
  std::map<std::string, std::pair<std::string, int>> vars;  // name -> (sort, element)
};

bool oracle_sat(const KripkeModel& k, int w, const Sentence& s, const OracleEnv& env = {});
bool oracle_global(const KripkeModel& k, const Sentence& s);

}  // namespace hyloc::testing
