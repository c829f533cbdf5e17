#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyloc::testing {

std::string data_path(const std::string& name) { return std::string(HYLOC_DATA_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const SpecParseResult& calc_spec() {
  static const SpecParseResult r = [] {
    ParseOptions opts;
    opts.file_name = "calc.hspec";
    return parse_spec(read_file(data_path("calc.hspec")), opts);
  }();
  return r;
}

const HybridTheory& calc_theory() {
  const HybridTheory* th = calc_spec().theory("Calc");
  if (!th) throw std::runtime_error("Calc theory missing");
  return *th;
}

KripkeModel calc_model(const std::string& name) {
  auto sig = std::make_shared<const HybridSignature>(calc_theory().signature);
  ParseOptions opts;
  opts.file_name = name;
  ModelParseResult r = parse_model(read_file(data_path(name)), sig, opts);
  if (!r.model || !r.diagnostics.empty()) {
    std::string msg = "cannot load " + name;
    for (const auto& d : r.diagnostics) msg += "\n" + d.to_string();
    throw std::runtime_error(msg);
  }
  return *r.model;
}

}  // namespace hyloc::testing
