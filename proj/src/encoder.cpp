#include "hyloc/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <fmt/format.h>

#include "hyloc/error.hpp"

namespace hyloc {

using fol::Formula;

std::string sort_predicate(const std::string& sort) { return "is_" + sort; }
std::string nominal_constant(const std::string& nominal) { return "n_" + nominal; }
std::string modality_predicate(const std::string& modality) { return "r_" + modality; }
std::string op_function(const std::string& op) { return "f_" + op; }
std::string rel_predicate(const std::string& rel) { return "p_" + rel; }
std::string atom_predicate(const std::string& atom) { return "q_" + atom; }

namespace {

std::string world_var(int k) { return fmt::format("W{}", k); }
std::string nominal_var(const std::string& n) { return "K_" + n; }
std::string rigid_var(const std::string& v) { return "V_" + v; }

std::vector<fol::Term> world_vars(int first, int count) {
  std::vector<fol::Term> out;
  for (int i = 0; i < count; ++i) out.push_back(fol::Term::var(world_var(first + i)));
  return out;
}

Formula forall_worlds(const std::vector<fol::Term>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = Formula::forall(it->name, kWorldSort, std::move(body));
  return body;
}

Formula frame_axiom(const std::string& m, FrameProperty p) {
  const auto r = modality_predicate(m);
  auto v = world_vars(1, 3);
  switch (p) {
    case FrameProperty::Reflexive:
      return forall_worlds({v[0]}, Formula::pred(r, {v[0], v[0]}));
    case FrameProperty::Symmetric:
      return forall_worlds({v[0], v[1]}, Formula::implication(Formula::pred(r, {v[0], v[1]}),
                                                              Formula::pred(r, {v[1], v[0]})));
    case FrameProperty::Transitive:
      return forall_worlds(
          v, Formula::implication(
                 Formula::conjunction({Formula::pred(r, {v[0], v[1]}), Formula::pred(r, {v[1], v[2]})}),
                 Formula::pred(r, {v[0], v[2]})));
    case FrameProperty::Serial:
      return forall_worlds({v[0]}, Formula::exists(v[1].name, kWorldSort, Formula::pred(r, {v[0], v[1]})));
  }
  return Formula::truth();
}

}  // namespace

fol::Theory encode_signature(const HybridSignature& sig, const ConstraintSet& cs) {
  fol::Theory th;
  th.name = "signature";
  auto& fs = th.signature;
  fs.sorts.push_back(kWorldSort);
  for (const auto& [name, s] : sig.base.sorts) fs.sorts.push_back(name);
  for (const auto& n : sig.nominals) fs.functions.push_back({nominal_constant(n), {}, kWorldSort});
  for (const auto& [name, op] : sig.base.ops) {
    std::vector<std::string> args;
    if (!op.rigid) args.push_back(kWorldSort);
    args.insert(args.end(), op.args.begin(), op.args.end());
    fs.functions.push_back({op_function(name), std::move(args), op.result});
  }
  for (const auto& [m, arity] : sig.modalities)
    fs.predicates.push_back({modality_predicate(m), std::vector<std::string>(static_cast<std::size_t>(arity), kWorldSort)});
  for (const auto& a : sig.base.atoms) fs.predicates.push_back({atom_predicate(a), {kWorldSort}});
  for (const auto& [name, rel] : sig.base.rels) {
    std::vector<std::string> args;
    if (!rel.rigid) args.push_back(kWorldSort);
    args.insert(args.end(), rel.args.begin(), rel.args.end());
    fs.predicates.push_back({rel_predicate(name), std::move(args)});
  }
  for (const auto& [m, props] : cs.frame)
    for (auto p : props)
      th.axioms.push_back({fmt::format("frame {} {}", to_string(p), m), frame_axiom(m, p)});
  return th;
}

namespace {

class StandardTranslation {
 public:
  explicit StandardTranslation(const HybridSignature& sig) : sig_(sig) {}

  Formula global(const Sentence& s) {
    auto w = fol::Term::var(world_var(next_++));
    return Formula::forall(w.name, kWorldSort, at(s, w));
  }

  Formula at(const Sentence& s, const fol::Term& w) {
    switch (s.kind()) {
      case Connective::Base:
        return base(s.atom(), w);
      case Connective::Nominal:
        return Formula::eq(w, nominal(s.name()));
      case Connective::Not:
        return Formula::negation(at(s.arg(0), w));
      case Connective::And:
        return Formula::conjunction({at(s.arg(0), w), at(s.arg(1), w)});
      case Connective::Or:
        return Formula::disjunction({at(s.arg(0), w), at(s.arg(1), w)});
      case Connective::Implies:
        return Formula::implication(at(s.arg(0), w), at(s.arg(1), w));
      case Connective::Box:
      case Connective::Diamond: {
        const auto n = static_cast<int>(s.args().size());
        auto succ = world_vars(next_, n);
        next_ += n;
        std::vector<fol::Term> tuple{w};
        tuple.insert(tuple.end(), succ.begin(), succ.end());
        auto access = Formula::pred(modality_predicate(s.name()), tuple);
        std::vector<Formula> parts;
        for (int i = 0; i < n; ++i) parts.push_back(at(s.arg(static_cast<std::size_t>(i)), succ[static_cast<std::size_t>(i)]));
        Formula body = s.kind() == Connective::Box
                           ? Formula::implication(std::move(access), Formula::disjunction(std::move(parts)))
                           : Formula::conjunction({std::move(access), Formula::conjunction(std::move(parts))});
        for (auto it = succ.rbegin(); it != succ.rend(); ++it)
          body = s.kind() == Connective::Box ? Formula::forall(it->name, kWorldSort, std::move(body))
                                             : Formula::exists(it->name, kWorldSort, std::move(body));
        return body;
      }
      case Connective::At:
        return at(s.arg(0), nominal(s.name()));
      case Connective::ForallNom:
      case Connective::ExistsNom: {
        bool fresh = bound_nominals_.insert(s.name()).second;
        Formula body = at(s.arg(0), w);
        if (fresh) bound_nominals_.erase(s.name());
        return s.kind() == Connective::ForallNom
                   ? Formula::forall(nominal_var(s.name()), kWorldSort, std::move(body))
                   : Formula::exists(nominal_var(s.name()), kWorldSort, std::move(body));
      }
      case Connective::ForallRigid:
      case Connective::ExistsRigid: {
        Formula body = at(s.arg(0), w);
        return s.kind() == Connective::ForallRigid
                   ? Formula::forall(rigid_var(s.name()), s.sort(), std::move(body))
                   : Formula::exists(rigid_var(s.name()), s.sort(), std::move(body));
      }
    }
    return Formula::truth();
  }

 private:
  fol::Term nominal(const std::string& n) const {
    if (bound_nominals_.count(n)) return fol::Term::var(nominal_var(n));
    if (sig_.has_nominal(n)) return fol::Term::app(nominal_constant(n));
    throw UnboundName(fmt::format("nominal '{}' is neither declared nor bound", n));
  }

  fol::Term term(const Term& t, const fol::Term& w) const {
    if (t.is_var()) return fol::Term::var(rigid_var(t.name));
    const OpDecl* op = sig_.base.find_op(t.name);
    if (!op) throw EncodingFailure(fmt::format("unknown operation '{}'", t.name));
    std::vector<fol::Term> args;
    if (!op->rigid) args.push_back(w);
    for (const auto& a : t.args) args.push_back(term(a, w));
    return fol::Term::app(op_function(t.name), std::move(args));
  }

  Formula base(const BaseSentence& a, const fol::Term& w) const {
    switch (a.kind) {
      case BaseSentence::Kind::Prop:
        return Formula::pred(atom_predicate(a.symbol), {w});
      case BaseSentence::Kind::Equation:
        return Formula::eq(term(a.args[0], w), term(a.args[1], w));
      case BaseSentence::Kind::Relation: {
        const RelDecl* rel = sig_.base.find_rel(a.symbol);
        if (!rel) throw EncodingFailure(fmt::format("unknown relation '{}'", a.symbol));
        std::vector<fol::Term> args;
        if (!rel->rigid) args.push_back(w);
        for (const auto& t : a.args) args.push_back(term(t, w));
        return Formula::pred(rel_predicate(a.symbol), std::move(args));
      }
    }
    return Formula::truth();
  }

  const HybridSignature& sig_;
  std::set<std::string> bound_nominals_;
  int next_ = 1;
};

}  // namespace

fol::Formula encode_sentence(const HybridSignature& sig, const Sentence& s, const fol::Term& world) {
  return StandardTranslation(sig).at(s, world);
}

fol::Formula encode_global(const HybridSignature& sig, const Sentence& s) {
  StandardTranslation st(sig);
  // The outer world variable is W0; inner ones are numbered from W1.
  auto w = fol::Term::var(world_var(0));
  return Formula::forall(w.name, kWorldSort, st.at(s, w));
}

fol::Formula relativize(const fol::Formula& f) {
  using K = Formula::Kind;
  if (f.kind == K::Forall || f.kind == K::Exists) {
    Formula body = relativize(f.sub[0]);
    if (f.sort.empty()) return f.kind == K::Forall ? Formula::forall(f.symbol, {}, body) : Formula::exists(f.symbol, {}, body);
    auto guard = Formula::pred(sort_predicate(f.sort), {fol::Term::var(f.symbol)});
    return f.kind == K::Forall
               ? Formula::forall(f.symbol, {}, Formula::implication(std::move(guard), std::move(body)))
               : Formula::exists(f.symbol, {}, Formula::conjunction({std::move(guard), std::move(body)}));
  }
  Formula out = f;
  for (auto& s : out.sub) s = relativize(s);
  return out;
}

fol::Theory unsort(const fol::Theory& th) {
  fol::Theory out;
  out.name = th.name;
  for (const auto& f : th.signature.functions)
    out.signature.functions.push_back({f.name, std::vector<std::string>(f.args.size()), {}});
  for (const auto& p : th.signature.predicates)
    out.signature.predicates.push_back({p.name, std::vector<std::string>(p.args.size())});
  for (const auto& s : th.signature.sorts)
    out.signature.predicates.push_back({sort_predicate(s), {std::string{}}});

  for (const auto& ax : th.axioms) out.axioms.push_back({ax.label, relativize(ax.formula)});

  for (const auto& f : th.signature.functions) {
    std::vector<fol::Term> vars;
    std::vector<Formula> guards;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      vars.push_back(fol::Term::var(fmt::format("X{}", i + 1)));
      guards.push_back(Formula::pred(sort_predicate(f.args[i]), {vars.back()}));
    }
    Formula closed = Formula::pred(sort_predicate(f.result), {fol::Term::app(f.name, vars)});
    if (!vars.empty()) {
      closed = Formula::implication(Formula::conjunction(std::move(guards)), std::move(closed));
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) closed = Formula::forall(it->name, {}, std::move(closed));
    }
    out.axioms.push_back({"closure " + f.name, std::move(closed)});
  }
  for (const auto& s : th.signature.sorts)
    out.axioms.push_back({"nonempty " + s, Formula::exists("X", {}, Formula::pred(sort_predicate(s), {fol::Term::var("X")}))});
  return out;
}

EncodedTask encode_task(const HybridTheory& theory, const std::optional<Sentence>& goal) {
  EncodedTask task;
  task.name = theory.name;
  task.sorted = encode_signature(theory.signature, theory.constraints);
  task.sorted.name = theory.name;
  for (std::size_t i = 0; i < theory.axioms.size(); ++i)
    task.sorted.axioms.push_back({fmt::format("axiom {}", i + 1), encode_global(theory.signature, theory.axioms[i])});
  task.unsorted = unsort(task.sorted);
  if (goal) {
    task.sorted_goal = encode_global(theory.signature, *goal);
    task.unsorted_goal = relativize(*task.sorted_goal);
  }
  return task;
}

namespace {

bool lower_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool upper_word(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

const std::string& functor(const std::string& s) {
  if (!lower_word(s)) throw UnsanitizableIdentifier(fmt::format("'{}' is not a TPTP functor", s));
  return s;
}

const std::string& variable(const std::string& s) {
  if (!upper_word(s)) throw UnsanitizableIdentifier(fmt::format("'{}' is not a TPTP variable", s));
  return s;
}

std::string tptp(const fol::Term& t) {
  if (t.is_var()) return variable(t.name);
  std::string out = functor(t.name);
  if (t.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ",";
    out += tptp(t.args[i]);
  }
  return out + ")";
}

std::string tptp(const Formula& f) {
  using K = Formula::Kind;
  auto chain = [&](std::string_view op) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.sub.size(); ++i) {
      if (i) out += fmt::format(" {} ", op);
      out += tptp(f.sub[i]);
    }
    return out + ")";
  };
  switch (f.kind) {
    case K::True: return "$true";
    case K::False: return "$false";
    case K::Pred: {
      std::string out = functor(f.symbol);
      if (f.terms.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) out += ",";
        out += tptp(f.terms[i]);
      }
      return out + ")";
    }
    case K::Eq: return fmt::format("({} = {})", tptp(f.terms[0]), tptp(f.terms[1]));
    case K::Not: return fmt::format("~ {}", tptp(f.sub[0]));
    case K::And: return chain("&");
    case K::Or: return chain("|");
    case K::Implies: return chain("=>");
    case K::Iff: return chain("<=>");
    case K::Forall:
    case K::Exists:
      return fmt::format("({} [{}] : {})", f.kind == K::Forall ? "!" : "?", variable(f.symbol), tptp(f.sub[0]));
  }
  return "$true";
}

}  // namespace

std::string emit_tptp(const EncodedTask& task) {
  if (!task.unsorted.signature.unsorted()) throw EncodingFailure("task is not unsorted");
  std::ostringstream os;
  os << "% problem: " << task.name << "\n";
  int n = 0;
  for (const auto& ax : task.unsorted.axioms) {
    os << "% " << ax.label << "\n";
    os << "fof(ax_" << ++n << ", axiom, " << tptp(ax.formula) << ").\n";
  }
  if (task.unsorted_goal) os << "fof(goal, conjecture, " << tptp(*task.unsorted_goal) << ").\n";
  return os.str();
}

fol::Structure induced_fol_model(const KripkeModel& model) {
  const HybridSignature& sig = *model.signature;
  const int worlds = model.world_count();
  fol::Structure st;

  // Element blocks: worlds, then each sort.
  std::map<std::string, int> offset;
  std::map<std::string, int> width;
  int next = worlds;
  for (const auto& [name, s] : sig.base.sorts) {
    int w = 0;
    for (const auto& loc : model.local) w = std::max(w, loc.carrier_size(name));
    offset[name] = next;
    width[name] = w;
    next += w;
  }
  st.universe = next;
  auto& world_dom = st.sort_domains[kWorldSort];
  for (int w = 0; w < worlds; ++w) {
    world_dom.push_back(w);
    st.predicates[sort_predicate(kWorldSort)].insert({w});
  }
  for (const auto& [name, s] : sig.base.sorts) {
    auto& dom = st.sort_domains[name];
    auto& pred = st.predicates[sort_predicate(name)];
    for (int e = 0; e < width[name]; ++e) {
      dom.push_back(offset[name] + e);
      pred.insert({offset[name] + e});
    }
  }

  for (const auto& n : sig.nominals) {
    st.function_arity[nominal_constant(n)] = 0;
    st.functions[nominal_constant(n)] = {model.nominal_at.at(n)};
  }
  for (const auto& [m, arity] : sig.modalities) {
    auto& p = st.predicates[modality_predicate(m)];
    for (const auto& t : model.relation(m)) p.insert(t);
  }
  for (const auto& a : sig.base.atoms) {
    auto& p = st.predicates[atom_predicate(a)];
    for (int w = 0; w < worlds; ++w)
      if (model.local[static_cast<std::size_t>(w)].valuation.at(a)) p.insert({w});
  }

  const auto universe = static_cast<std::size_t>(st.universe);
  // Decodes a universe tuple into the local arguments of a base symbol;
  // returns the world and element indices or nullopt when out of sort.
  auto decode = [&](const std::vector<int>& tuple, bool rigid,
                    const std::vector<std::string>& sorts) -> std::optional<std::pair<int, std::vector<int>>> {
    std::size_t i = 0;
    int w = 0;
    if (!rigid) {
      if (tuple[0] >= worlds) return std::nullopt;
      w = tuple[0];
      i = 1;
    }
    std::vector<int> local;
    const BaseModel& loc = model.local[static_cast<std::size_t>(w)];
    for (const auto& s : sorts) {
      int e = tuple[i++] - offset[s];
      if (e < 0 || e >= loc.carrier_size(s)) return std::nullopt;
      local.push_back(e);
    }
    return std::pair{w, local};
  };
  auto tuples = [&](std::size_t arity) {
    std::vector<std::vector<int>> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) total *= universe;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<int> t(arity);
      std::size_t r = idx;
      for (std::size_t i = arity; i-- > 0;) {
        t[i] = static_cast<int>(r % universe);
        r /= universe;
      }
      out.push_back(std::move(t));
    }
    return out;
  };

  for (const auto& [name, op] : sig.base.ops) {
    const std::size_t arity = op.args.size() + (op.rigid ? 0 : 1);
    auto& table = st.functions[op_function(name)];
    st.function_arity[op_function(name)] = static_cast<int>(arity);
    for (const auto& t : tuples(arity)) {
      int value = offset[op.result];  // junk value outside the sorted domain
      if (auto d = decode(t, op.rigid, op.args)) {
        const BaseModel& loc = model.local[static_cast<std::size_t>(d->first)];
        value = offset[op.result] + loc.ops.at(name).at(table_index(loc, op.args, d->second));
      }
      table.push_back(value);
    }
  }
  for (const auto& [name, rel] : sig.base.rels) {
    auto& p = st.predicates[rel_predicate(name)];
    for (int w = 0; w < (rel.rigid ? 1 : worlds); ++w) {
      const BaseModel& loc = model.local[static_cast<std::size_t>(w)];
      auto it = loc.rels.find(name);
      if (it == loc.rels.end()) continue;
      for (const auto& local : it->second) {
        std::vector<int> t;
        if (!rel.rigid) t.push_back(w);
        for (std::size_t i = 0; i < local.size(); ++i) t.push_back(offset[rel.args[i]] + local[i]);
        p.insert(std::move(t));
      }
    }
  }
  return st;
}

}  // namespace hyloc
