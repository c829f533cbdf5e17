#include "hyloc/kripke.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "hyloc/error.hpp"

namespace hyloc {

int KripkeModel::world_index(const std::string& name) const {
  auto it = std::find(worlds.begin(), worlds.end(), name);
  return it == worlds.end() ? -1 : static_cast<int>(it - worlds.begin());
}

const std::set<WorldTuple>& KripkeModel::relation(const std::string& modality) const {
  static const std::set<WorldTuple> empty;
  auto it = relations.find(modality);
  return it == relations.end() ? empty : it->second;
}

std::vector<std::string> check_structure(const KripkeModel& model) {
  std::vector<std::string> out;
  if (!model.signature) {
    out.push_back("model has no signature");
    return out;
  }
  const HybridSignature& sig = *model.signature;
  const int n = model.world_count();
  if (n == 0) out.push_back("model has no worlds");
  if (static_cast<int>(model.local.size()) != n)
    out.push_back("number of local models differs from number of worlds");

  for (const auto& [m, tuples] : model.relations) {
    int arity = sig.arity(m);
    if (arity == 0) {
      out.push_back(fmt::format("relation for undeclared modality '{}'", m));
      continue;
    }
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != arity) {
        out.push_back(fmt::format("tuple of width {} for modality '{}' of arity {}", t.size(), m,
                                  arity));
        break;
      }
      if (std::any_of(t.begin(), t.end(), [&](int w) { return w < 0 || w >= n; })) {
        out.push_back(fmt::format("tuple of '{}' mentions an unknown world", m));
        break;
      }
    }
  }
  for (const auto& nom : sig.nominals) {
    auto it = model.nominal_at.find(nom);
    if (it == model.nominal_at.end())
      out.push_back(fmt::format("nominal '{}' unassigned", nom));
    else if (it->second < 0 || it->second >= n)
      out.push_back(fmt::format("nominal '{}' denotes an unknown world", nom));
  }
  for (const auto& [nom, w] : model.nominal_at)
    if (!sig.has_nominal(nom)) out.push_back(fmt::format("assignment of undeclared nominal '{}'", nom));

  for (std::size_t w = 0; w < model.local.size() && w < model.worlds.size(); ++w)
    for (const auto& p : validate_model(sig.base, model.local[w]))
      out.push_back(fmt::format("world {}: {}", model.worlds[w], p));
  return out;
}

namespace {

std::string tuple_text(const KripkeModel& m, const WorldTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += m.worlds[static_cast<std::size_t>(t[i])];
  }
  return s + ")";
}

void check_frame(const KripkeModel& model, const std::string& m, FrameProperty p,
                 std::vector<Violation>& out) {
  const auto& r = model.relation(m);
  const int n = model.world_count();
  auto has = [&](int a, int b) { return r.count(WorldTuple{a, b}) > 0; };
  auto fail = [&](const WorldTuple& t, std::string_view why) {
    out.push_back(Violation{fmt::format("{} is not {}: {} {}", m, to_string(p), tuple_text(model, t), why)});
  };
  switch (p) {
    case FrameProperty::Reflexive:
      for (int a = 0; a < n; ++a)
        if (!has(a, a)) return fail({a, a}, "missing");
      return;
    case FrameProperty::Symmetric:
      for (const auto& t : r)
        if (!has(t[1], t[0])) return fail({t[1], t[0]}, "missing");
      return;
    case FrameProperty::Transitive:
      for (const auto& t : r)
        for (int c = 0; c < n; ++c)
          if (has(t[1], c) && !has(t[0], c)) return fail({t[0], c}, "missing");
      return;
    case FrameProperty::Serial:
      for (int a = 0; a < n; ++a) {
        bool any = false;
        for (int b = 0; b < n && !any; ++b) any = has(a, b);
        if (!any) {
          out.push_back(Violation{fmt::format("{} is not serial: world {} has no successor", m,
                                              model.worlds[static_cast<std::size_t>(a)])});
          return;
        }
      }
      return;
  }
}

}  // namespace

std::vector<Violation> check_constraints(const KripkeModel& model, const ConstraintSet& cs) {
  std::vector<Violation> out;
  const BaseSignature& base = model.signature->base;
  const auto& loc = model.local;
  for (std::size_t w = 1; w < loc.size(); ++w) {
    auto pair = fmt::format("worlds {} and {}", model.worlds[0], model.worlds[w]);
    for (const auto& [name, s] : base.sorts)
      if (s.rigid && loc[0].carriers.at(name) != loc[w].carriers.at(name))
        out.push_back(Violation{fmt::format("rigid sort {} has different carriers at {}", name, pair)});
    for (const auto& [name, op] : base.ops)
      if (op.rigid && loc[0].ops.at(name) != loc[w].ops.at(name))
        out.push_back(Violation{fmt::format("rigid operation {} differs between {}", name, pair)});
    for (const auto& [name, rel] : base.rels) {
      if (!rel.rigid) continue;
      auto get = [&](const BaseModel& m) {
        auto it = m.rels.find(name);
        return it == m.rels.end() ? std::set<std::vector<int>>{} : it->second;
      };
      if (get(loc[0]) != get(loc[w]))
        out.push_back(Violation{fmt::format("rigid relation {} differs between {}", name, pair)});
    }
  }
  for (const auto& [m, props] : cs.frame)
    for (auto p : props) check_frame(model, m, p, out);
  return out;
}

namespace {

class Evaluator {
 public:
  explicit Evaluator(const KripkeModel& m) : m_(m), sig_(*m.signature) {}

  bool eval(int w, const Sentence& s, Environment& env) const {
    switch (s.kind()) {
      case Connective::Base:
        return base_satisfies(sig_.base, m_.local[static_cast<std::size_t>(w)], s.atom(), env.rigid);
      case Connective::Nominal:
        return resolve(s.name(), env) == w;
      case Connective::Not:
        return !eval(w, s.arg(0), env);
      case Connective::And:
        return eval(w, s.arg(0), env) && eval(w, s.arg(1), env);
      case Connective::Or:
        return eval(w, s.arg(0), env) || eval(w, s.arg(1), env);
      case Connective::Implies:
        return !eval(w, s.arg(0), env) || eval(w, s.arg(1), env);
      case Connective::Box:
        // Every tuple leaving w needs SOME argument position to hold.
        for (const auto& t : successors(s.name(), w)) {
          bool some = false;
          for (std::size_t i = 0; i < s.args().size() && !some; ++i)
            some = eval(t[i + 1], s.arg(i), env);
          if (!some) return false;
        }
        return true;
      case Connective::Diamond:
        for (const auto& t : successors(s.name(), w)) {
          bool all = true;
          for (std::size_t i = 0; i < s.args().size() && all; ++i)
            all = eval(t[i + 1], s.arg(i), env);
          if (all) return true;
        }
        return false;
      case Connective::At:
        return eval(resolve(s.name(), env), s.arg(0), env);
      case Connective::ForallNom:
      case Connective::ExistsNom: {
        const bool universal = s.kind() == Connective::ForallNom;
        auto saved = env.nominals.find(s.name()) != env.nominals.end()
                         ? std::optional<int>(env.nominals[s.name()])
                         : std::nullopt;
        bool result = universal;
        for (int v = 0; v < m_.world_count(); ++v) {
          env.nominals[s.name()] = v;
          if (eval(w, s.arg(0), env) != universal) {
            result = !universal;
            break;
          }
        }
        if (saved) env.nominals[s.name()] = *saved; else env.nominals.erase(s.name());
        return result;
      }
      case Connective::ForallRigid:
      case Connective::ExistsRigid: {
        const bool universal = s.kind() == Connective::ForallRigid;
        auto it = env.rigid.find(s.name());
        auto saved = it != env.rigid.end() ? std::optional<Value>(it->second) : std::nullopt;
        const int size = m_.local[static_cast<std::size_t>(w)].carrier_size(s.sort());
        bool result = universal;
        for (int e = 0; e < size; ++e) {
          env.rigid[s.name()] = Value{s.sort(), e};
          if (eval(w, s.arg(0), env) != universal) {
            result = !universal;
            break;
          }
        }
        if (saved) env.rigid[s.name()] = *saved; else env.rigid.erase(s.name());
        return result;
      }
    }
    return false;
  }

  int resolve(const std::string& nominal, const Environment& env) const {
    if (auto it = env.nominals.find(nominal); it != env.nominals.end()) return it->second;
    if (auto it = m_.nominal_at.find(nominal); it != m_.nominal_at.end()) return it->second;
    throw UnboundName(fmt::format("nominal '{}' is neither bound nor assigned", nominal));
  }

  std::vector<WorldTuple> successors(const std::string& modality, int w) const {
    std::vector<WorldTuple> out;
    const auto& r = m_.relation(modality);
    for (auto it = r.lower_bound(WorldTuple{w}); it != r.end() && (*it)[0] == w; ++it)
      out.push_back(*it);
    return out;
  }

 private:
  const KripkeModel& m_;
  const HybridSignature& sig_;
};

}  // namespace

bool sat_local(const KripkeModel& model, int world, const Sentence& s, const Environment& env) {
  Environment e = env;
  return Evaluator(model).eval(world, s, e);
}

bool sat_global(const KripkeModel& model, const Sentence& s) {
  return !first_failing_world(model, s).has_value();
}

std::optional<int> first_failing_world(const KripkeModel& model, const Sentence& s) {
  Evaluator ev(model);
  Environment env;
  for (int w = 0; w < model.world_count(); ++w)
    if (!ev.eval(w, s, env)) return w;
  return std::nullopt;
}

bool TheoryReport::all_hold() const {
  return violations.empty() &&
         std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.holds; });
}

Witness explain_failure(const KripkeModel& model, int world, const Sentence& s) {
  Evaluator ev(model);
  Witness wit;
  wit.world = world;
  Environment env;
  int w = world;
  const Sentence* cur = &s;
  for (;;) {
    const Sentence& c = *cur;
    if (c.kind() == Connective::At) {
      w = ev.resolve(c.name(), env);
      cur = &c.arg(0);
    } else if (c.kind() == Connective::And) {
      cur = ev.eval(w, c.arg(0), env) ? &c.arg(1) : &c.arg(0);
    } else if (c.kind() == Connective::ForallNom) {
      int v = 0;
      for (; v < model.world_count(); ++v) {
        env.nominals[c.name()] = v;
        if (!ev.eval(w, c.arg(0), env)) break;
      }
      wit.bindings.emplace_back(c.name(), model.worlds[static_cast<std::size_t>(v)]);
      cur = &c.arg(0);
    } else if (c.kind() == Connective::ForallRigid) {
      const BaseModel& loc = model.local[static_cast<std::size_t>(w)];
      int e = 0;
      for (; e < loc.carrier_size(c.sort()); ++e) {
        env.rigid[c.name()] = Value{c.sort(), e};
        if (!ev.eval(w, c.arg(0), env)) break;
      }
      wit.bindings.emplace_back(c.name(), loc.carriers.at(c.sort()).at(static_cast<std::size_t>(e)));
      cur = &c.arg(0);
    } else {
      break;
    }
  }
  wit.focus = w;
  return wit;
}

TheoryReport check_theory(const KripkeModel& model, const HybridTheory& theory) {
  if (!model.signature || !(*model.signature == theory.signature))
    throw SignatureMismatch(fmt::format("model is not over the signature of spec {}", theory.name));
  TheoryReport report;
  report.violations = check_constraints(model, theory.constraints);
  for (std::size_t i = 0; i < theory.axioms.size(); ++i) {
    AxiomResult r;
    r.index = i;
    if (auto w = first_failing_world(model, theory.axioms[i])) {
      r.holds = false;
      r.witness = explain_failure(model, *w, theory.axioms[i]);
    }
    report.axioms.push_back(std::move(r));
  }
  return report;
}

KripkeModel reduct(const HybridMorphism& phi, const KripkeModel& target_model) {
  KripkeModel m;
  m.signature = std::make_shared<const HybridSignature>(phi.source);
  m.worlds = target_model.worlds;
  for (const auto& [name, arity] : phi.source.modalities)
    m.relations[name] = target_model.relation(phi.map_modality(name));
  for (const auto& n : phi.source.nominals) m.nominal_at[n] = target_model.nominal_at.at(phi.map_nominal(n));
  for (const auto& loc : target_model.local) m.local.push_back(reduct_model(phi.base, loc));
  return m;
}

}  // namespace hyloc
