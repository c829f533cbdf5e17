#include "hyloc/base_logic.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hyloc/error.hpp"

namespace hyloc {

std::string_view to_string(BaseKind kind) {
  return kind == BaseKind::Prop ? "PROP" : "RFOL";
}

namespace {

template <typename Map>
const typename Map::mapped_type* lookup(const Map& m, std::string_view name) {
  auto it = m.find(std::string(name));
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

const SortDecl* BaseSignature::find_sort(std::string_view name) const { return lookup(sorts, name); }
const OpDecl* BaseSignature::find_op(std::string_view name) const { return lookup(ops, name); }
const RelDecl* BaseSignature::find_rel(std::string_view name) const { return lookup(rels, name); }

bool BaseSignature::has_atom(std::string_view name) const {
  return atoms.count(std::string(name)) > 0;
}

bool BaseSignature::declares(std::string_view name) const {
  return has_atom(name) || find_sort(name) || find_op(name) || find_rel(name);
}

void BaseSignature::add_sort(std::string name, bool rigid) {
  auto key = name;
  sorts[key] = SortDecl{std::move(name), rigid};
}

void BaseSignature::add_op(std::string name, std::vector<std::string> args, std::string result,
                           bool rigid) {
  auto key = name;
  ops[key] = OpDecl{std::move(name), std::move(args), std::move(result), rigid};
}

void BaseSignature::add_rel(std::string name, std::vector<std::string> args, bool rigid) {
  auto key = name;
  rels[key] = RelDecl{std::move(name), std::move(args), rigid};
}

void BaseSignature::add_atom(std::string name) { atoms.insert(std::move(name)); }

std::vector<std::string> validate(const BaseSignature& sig) {
  std::vector<std::string> out;
  if (sig.kind == BaseKind::Prop) {
    if (!sig.sorts.empty() || !sig.ops.empty() || !sig.rels.empty())
      out.push_back("PROP signature declares sorts, ops or relations");
    return out;
  }
  if (!sig.atoms.empty()) out.push_back("RFOL signature declares propositional atoms");

  // Symbol classes share one namespace so that concrete syntax stays unambiguous.
  for (const auto& [name, op] : sig.ops) {
    if (sig.find_sort(name)) out.push_back(fmt::format("op '{}' clashes with a sort", name));
    if (sig.find_rel(name)) out.push_back(fmt::format("op '{}' clashes with a relation", name));
  }
  for (const auto& [name, rel] : sig.rels)
    if (sig.find_sort(name)) out.push_back(fmt::format("relation '{}' clashes with a sort", name));

  auto check_sort = [&](const std::string& owner, const std::string& s, bool rigid_owner) {
    const SortDecl* d = sig.find_sort(s);
    if (!d) {
      out.push_back(fmt::format("'{}' mentions undeclared sort '{}'", owner, s));
    } else if (rigid_owner && !d->rigid) {
      out.push_back(fmt::format("rigid symbol '{}' ranges over flexible sort '{}'", owner, s));
    }
  };
  for (const auto& [name, op] : sig.ops) {
    for (const auto& a : op.args) check_sort(name, a, op.rigid);
    check_sort(name, op.result, op.rigid);
  }
  for (const auto& [name, rel] : sig.rels)
    for (const auto& a : rel.args) check_sort(name, a, rel.rigid);
  return out;
}

Term Term::var(std::string name) { return Term{Kind::Var, std::move(name), {}}; }

Term Term::app(std::string op, std::vector<Term> args) {
  return Term{Kind::App, std::move(op), std::move(args)};
}

BaseSentence BaseSentence::prop(std::string atom) {
  return BaseSentence{Kind::Prop, std::move(atom), {}};
}

BaseSentence BaseSentence::equation(Term lhs, Term rhs) {
  return BaseSentence{Kind::Equation, {}, {std::move(lhs), std::move(rhs)}};
}

BaseSentence BaseSentence::relation(std::string rel, std::vector<Term> args) {
  return BaseSentence{Kind::Relation, std::move(rel), std::move(args)};
}

std::string sort_of(const BaseSignature& sig, const Term& t, const SortContext& vars) {
  if (t.is_var()) {
    auto it = vars.find(t.name);
    if (it == vars.end()) throw UnboundVariable(fmt::format("unbound variable '{}'", t.name));
    return it->second;
  }
  const OpDecl* op = sig.find_op(t.name);
  if (!op) throw UnsortedTerm(fmt::format("unknown operation '{}'", t.name));
  if (op->args.size() != t.args.size())
    throw UnsortedTerm(fmt::format("operation '{}' expects {} argument(s), got {}", t.name,
                                   op->args.size(), t.args.size()));
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    auto s = sort_of(sig, t.args[i], vars);
    if (s != op->args[i])
      throw UnsortedTerm(fmt::format("argument {} of '{}' has sort {}, expected {}", i + 1,
                                     t.name, s, op->args[i]));
  }
  return op->result;
}

void check_sorted(const BaseSignature& sig, const BaseSentence& s, const SortContext& vars) {
  switch (s.kind) {
    case BaseSentence::Kind::Prop:
      if (sig.kind != BaseKind::Prop || !sig.has_atom(s.symbol))
        throw UnsortedTerm(fmt::format("unknown proposition '{}'", s.symbol));
      return;
    case BaseSentence::Kind::Equation: {
      if (sig.kind != BaseKind::Rfol) throw UnsortedTerm("equation over a PROP signature");
      auto l = sort_of(sig, s.args.at(0), vars);
      auto r = sort_of(sig, s.args.at(1), vars);
      if (l != r) throw UnsortedTerm(fmt::format("equation between sorts {} and {}", l, r));
      return;
    }
    case BaseSentence::Kind::Relation: {
      const RelDecl* rel = sig.kind == BaseKind::Rfol ? sig.find_rel(s.symbol) : nullptr;
      if (!rel) throw UnsortedTerm(fmt::format("unknown relation '{}'", s.symbol));
      if (rel->args.size() != s.args.size())
        throw UnsortedTerm(fmt::format("relation '{}' expects {} argument(s), got {}", s.symbol,
                                       rel->args.size(), s.args.size()));
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        auto so = sort_of(sig, s.args[i], vars);
        if (so != rel->args[i])
          throw UnsortedTerm(fmt::format("argument {} of '{}' has sort {}, expected {}", i + 1,
                                         s.symbol, so, rel->args[i]));
      }
      return;
    }
  }
}

namespace {

void collect_term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_vars(a, out);
}

}  // namespace

void collect_variables(const BaseSentence& s, std::set<std::string>& out) {
  for (const auto& t : s.args) collect_term_vars(t, out);
}

int BaseModel::carrier_size(const std::string& sort) const {
  auto it = carriers.find(sort);
  return it == carriers.end() ? 0 : static_cast<int>(it->second.size());
}

std::size_t table_rows(const BaseModel& m, const std::vector<std::string>& arg_sorts) {
  std::size_t rows = 1;
  for (const auto& s : arg_sorts) rows *= static_cast<std::size_t>(m.carrier_size(s));
  return rows;
}

std::size_t table_index(const BaseModel& m, const std::vector<std::string>& arg_sorts,
                        const std::vector<int>& args) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < arg_sorts.size(); ++i)
    idx = idx * static_cast<std::size_t>(m.carrier_size(arg_sorts[i])) +
          static_cast<std::size_t>(args[i]);
  return idx;
}

std::vector<std::string> validate_model(const BaseSignature& sig, const BaseModel& m) {
  std::vector<std::string> out;
  if (sig.kind == BaseKind::Prop) {
    for (const auto& a : sig.atoms)
      if (!m.valuation.count(a)) out.push_back(fmt::format("atom '{}' has no truth value", a));
    for (const auto& [a, v] : m.valuation)
      if (!sig.has_atom(a)) out.push_back(fmt::format("valuation of undeclared atom '{}'", a));
    return out;
  }
  for (const auto& [name, decl] : sig.sorts) {
    if (m.carrier_size(name) == 0) out.push_back(fmt::format("carrier of sort {} is empty", name));
  }
  for (const auto& [name, carrier] : m.carriers)
    if (!sig.find_sort(name)) out.push_back(fmt::format("carrier for undeclared sort '{}'", name));
  if (!out.empty()) return out;

  for (const auto& [name, op] : sig.ops) {
    auto it = m.ops.find(name);
    if (it == m.ops.end()) {
      out.push_back(fmt::format("operation '{}' has no table", name));
      continue;
    }
    if (it->second.size() != table_rows(m, op.args)) {
      out.push_back(fmt::format("table of '{}' is not total ({} of {} rows)", name,
                                it->second.size(), table_rows(m, op.args)));
      continue;
    }
    int limit = m.carrier_size(op.result);
    for (int v : it->second)
      if (v < 0 || v >= limit) {
        out.push_back(fmt::format("table of '{}' leaves carrier {}", name, op.result));
        break;
      }
  }
  for (const auto& [name, rel] : sig.rels) {
    auto it = m.rels.find(name);
    if (it == m.rels.end()) continue;  // missing relation means empty
    for (const auto& tuple : it->second) {
      bool ok = tuple.size() == rel.args.size();
      for (std::size_t i = 0; ok && i < tuple.size(); ++i)
        ok = tuple[i] >= 0 && tuple[i] < m.carrier_size(rel.args[i]);
      if (!ok) {
        out.push_back(fmt::format("relation '{}' holds a tuple outside its carriers", name));
        break;
      }
    }
  }
  return out;
}

int evaluate(const BaseSignature& sig, const BaseModel& m, const Term& t, const BaseEnv& env) {
  if (t.is_var()) {
    auto it = env.find(t.name);
    if (it == env.end()) throw UnboundVariable(fmt::format("unbound variable '{}'", t.name));
    return it->second.element;
  }
  const OpDecl* op = sig.find_op(t.name);
  if (!op || op->args.size() != t.args.size())
    throw UnsortedTerm(fmt::format("ill-formed application of '{}'", t.name));
  std::vector<int> args;
  args.reserve(t.args.size());
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (t.args[i].is_var()) {
      auto it = env.find(t.args[i].name);
      if (it != env.end() && it->second.sort != op->args[i])
        throw UnsortedTerm(fmt::format("variable '{}' of sort {} used at sort {}", t.args[i].name,
                                       it->second.sort, op->args[i]));
    }
    args.push_back(evaluate(sig, m, t.args[i], env));
  }
  return m.ops.at(t.name).at(table_index(m, op->args, args));
}

bool base_satisfies(const BaseSignature& sig, const BaseModel& m, const BaseSentence& s,
                    const BaseEnv& env) {
  switch (s.kind) {
    case BaseSentence::Kind::Prop: {
      auto it = m.valuation.find(s.symbol);
      if (it == m.valuation.end())
        throw UnsortedTerm(fmt::format("unknown proposition '{}'", s.symbol));
      return it->second;
    }
    case BaseSentence::Kind::Equation: {
      SortContext ctx;
      for (const auto& [v, val] : env) ctx[v] = val.sort;
      std::set<std::string> vars;
      collect_variables(s, vars);
      for (const auto& v : vars)
        if (!env.count(v)) throw UnboundVariable(fmt::format("unbound variable '{}'", v));
      if (sort_of(sig, s.args[0], ctx) != sort_of(sig, s.args[1], ctx))
        throw UnsortedTerm("equation between different sorts");
      return evaluate(sig, m, s.args[0], env) == evaluate(sig, m, s.args[1], env);
    }
    case BaseSentence::Kind::Relation: {
      const RelDecl* rel = sig.find_rel(s.symbol);
      if (!rel || rel->args.size() != s.args.size())
        throw UnsortedTerm(fmt::format("ill-formed relational atom '{}'", s.symbol));
      std::vector<int> tuple;
      tuple.reserve(s.args.size());
      for (const auto& a : s.args) tuple.push_back(evaluate(sig, m, a, env));
      auto it = m.rels.find(s.symbol);
      return it != m.rels.end() && it->second.count(tuple) > 0;
    }
  }
  return false;
}

SignatureMorphism SignatureMorphism::identity(const BaseSignature& sig) {
  return inclusion(sig, sig);
}

SignatureMorphism SignatureMorphism::inclusion(const BaseSignature& source,
                                               const BaseSignature& target) {
  SignatureMorphism phi;
  phi.source = source;
  phi.target = target;
  return phi;
}

namespace {

std::string map_symbol(const std::map<std::string, std::string>& m, const std::string& name,
                       bool in_source, bool in_target_if_identity, std::string_view what) {
  if (!in_source)
    throw SymbolNotInDomain(fmt::format("{} '{}' is not in the morphism's source", what, name));
  auto it = m.find(name);
  if (it != m.end()) return it->second;
  if (!in_target_if_identity)
    throw SymbolNotInDomain(
        fmt::format("{} '{}' has no image and is not declared in the target", what, name));
  return name;
}

}  // namespace

std::string SignatureMorphism::map_sort(const std::string& s) const {
  return map_symbol(sort_map, s, source.find_sort(s) != nullptr, target.find_sort(s) != nullptr,
                    "sort");
}

std::string SignatureMorphism::map_op(const std::string& op) const {
  return map_symbol(op_map, op, source.find_op(op) != nullptr, target.find_op(op) != nullptr,
                    "operation");
}

std::string SignatureMorphism::map_rel(const std::string& rel) const {
  return map_symbol(rel_map, rel, source.find_rel(rel) != nullptr, target.find_rel(rel) != nullptr,
                    "relation");
}

std::string SignatureMorphism::map_atom(const std::string& atom) const {
  return map_symbol(atom_map, atom, source.has_atom(atom), target.has_atom(atom), "atom");
}

std::vector<std::string> validate(const SignatureMorphism& phi) {
  std::vector<std::string> out;
  if (phi.source.kind != phi.target.kind) {
    out.push_back("source and target belong to different base logics");
    return out;
  }
  auto attempt = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      out.emplace_back(e.what());
    }
  };
  for (const auto& a : phi.source.atoms)
    attempt([&] {
      if (!phi.target.has_atom(phi.map_atom(a)))
        out.push_back(fmt::format("image of atom '{}' is not in the target", a));
    });
  for (const auto& [name, s] : phi.source.sorts)
    attempt([&] {
      const SortDecl* t = phi.target.find_sort(phi.map_sort(name));
      if (!t)
        out.push_back(fmt::format("image of sort '{}' is not in the target", name));
      else if (t->rigid != s.rigid)
        out.push_back(fmt::format("sort '{}' changes rigidity", name));
    });
  auto mapped_sorts = [&](const std::vector<std::string>& v) {
    std::vector<std::string> r;
    for (const auto& s : v) r.push_back(phi.map_sort(s));
    return r;
  };
  for (const auto& [name, op] : phi.source.ops)
    attempt([&] {
      const OpDecl* t = phi.target.find_op(phi.map_op(name));
      if (!t) {
        out.push_back(fmt::format("image of op '{}' is not in the target", name));
      } else if (t->args != mapped_sorts(op.args) || t->result != phi.map_sort(op.result)) {
        out.push_back(fmt::format("op '{}' is mapped to a symbol of a different rank", name));
      } else if (t->rigid != op.rigid) {
        out.push_back(fmt::format("op '{}' changes rigidity", name));
      }
    });
  for (const auto& [name, rel] : phi.source.rels)
    attempt([&] {
      const RelDecl* t = phi.target.find_rel(phi.map_rel(name));
      if (!t) {
        out.push_back(fmt::format("image of relation '{}' is not in the target", name));
      } else if (t->args != mapped_sorts(rel.args)) {
        out.push_back(fmt::format("relation '{}' is mapped to a symbol of a different rank", name));
      } else if (t->rigid != rel.rigid) {
        out.push_back(fmt::format("relation '{}' changes rigidity", name));
      }
    });
  return out;
}

Term translate_term(const SignatureMorphism& phi, const Term& t) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(translate_term(phi, a));
  return Term::app(phi.map_op(t.name), std::move(args));
}

BaseSentence translate_sentence(const SignatureMorphism& phi, const BaseSentence& s) {
  switch (s.kind) {
    case BaseSentence::Kind::Prop:
      return BaseSentence::prop(phi.map_atom(s.symbol));
    case BaseSentence::Kind::Equation:
      return BaseSentence::equation(translate_term(phi, s.args[0]), translate_term(phi, s.args[1]));
    case BaseSentence::Kind::Relation: {
      std::vector<Term> args;
      for (const auto& a : s.args) args.push_back(translate_term(phi, a));
      return BaseSentence::relation(phi.map_rel(s.symbol), std::move(args));
    }
  }
  return s;
}

BaseModel reduct_model(const SignatureMorphism& phi, const BaseModel& target_model) {
  BaseModel m;
  for (const auto& a : phi.source.atoms) m.valuation[a] = target_model.valuation.at(phi.map_atom(a));
  for (const auto& [name, s] : phi.source.sorts)
    m.carriers[name] = target_model.carriers.at(phi.map_sort(name));
  for (const auto& [name, op] : phi.source.ops) m.ops[name] = target_model.ops.at(phi.map_op(name));
  for (const auto& [name, rel] : phi.source.rels) {
    auto it = target_model.rels.find(phi.map_rel(name));
    if (it != target_model.rels.end()) m.rels[name] = it->second;
  }
  return m;
}

BaseEnv translate_env(const SignatureMorphism& phi, const BaseEnv& env) {
  BaseEnv out;
  for (const auto& [v, val] : env) out[v] = Value{phi.map_sort(val.sort), val.element};
  return out;
}

SignatureMorphism compose(const SignatureMorphism& first, const SignatureMorphism& second) {
  SignatureMorphism c;
  c.source = first.source;
  c.target = second.target;
  for (const auto& a : first.source.atoms) c.atom_map[a] = second.map_atom(first.map_atom(a));
  for (const auto& [s, d] : first.source.sorts) c.sort_map[s] = second.map_sort(first.map_sort(s));
  for (const auto& [o, d] : first.source.ops) c.op_map[o] = second.map_op(first.map_op(o));
  for (const auto& [r, d] : first.source.rels) c.rel_map[r] = second.map_rel(first.map_rel(r));
  return c;
}

}  // namespace hyloc
