#include "hyloc/hybrid.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "hyloc/error.hpp"

namespace hyloc {

int HybridSignature::arity(const std::string& modality) const {
  auto it = modalities.find(modality);
  return it == modalities.end() ? 0 : it->second;
}

std::vector<std::string> validate(const HybridSignature& sig) {
  std::vector<std::string> out = validate(sig.base);
  for (const auto& n : sig.nominals) {
    if (sig.modalities.count(n)) out.push_back(fmt::format("nominal '{}' clashes with a modality", n));
    if (sig.base.declares(n)) out.push_back(fmt::format("nominal '{}' clashes with a base symbol", n));
    if (n == kWorldSort) out.push_back("'World' is reserved");
  }
  for (const auto& [m, arity] : sig.modalities) {
    if (sig.base.declares(m)) out.push_back(fmt::format("modality '{}' clashes with a base symbol", m));
    if (arity < 2)
      out.push_back(fmt::format("modality '{}' has arity {}; a relation of width below 2 admits "
                                "no successor argument",
                                m, arity));
  }
  if (sig.base.find_sort(kWorldSort)) out.push_back("'World' is reserved and cannot be a base sort");
  return out;
}

std::string_view to_string(FrameProperty p) {
  switch (p) {
    case FrameProperty::Reflexive: return "reflexive";
    case FrameProperty::Symmetric: return "symmetric";
    case FrameProperty::Transitive: return "transitive";
    case FrameProperty::Serial: return "serial";
  }
  return "?";
}

bool parse_frame_property(std::string_view text, FrameProperty& out) {
  for (auto p : {FrameProperty::Reflexive, FrameProperty::Symmetric, FrameProperty::Transitive,
                 FrameProperty::Serial}) {
    if (to_string(p) == text) {
      out = p;
      return true;
    }
  }
  return false;
}

std::vector<std::string> validate(const HybridSignature& sig, const ConstraintSet& cs) {
  std::vector<std::string> out;
  for (const auto& [m, props] : cs.frame) {
    int a = sig.arity(m);
    if (a == 0)
      out.push_back(fmt::format("frame properties for undeclared modality '{}'", m));
    else if (a != 2)
      out.push_back(fmt::format("frame properties require a binary modality; '{}' has arity {}", m, a));
  }
  return out;
}

namespace {

Sentence::Node make(Connective k, std::string name = {}, std::string sort = {},
                    BaseSentence atom = {}, std::vector<Sentence> args = {}) {
  return Sentence::Node{k, std::move(name), std::move(sort), std::move(atom), std::move(args)};
}

}  // namespace

#define HYLOC_SENTENCE(node_expr) Sentence(std::make_shared<const Node>(node_expr))

Sentence Sentence::base(BaseSentence atom) {
  return HYLOC_SENTENCE(make(Connective::Base, {}, {}, std::move(atom)));
}
Sentence Sentence::nominal(std::string name) {
  return HYLOC_SENTENCE(make(Connective::Nominal, std::move(name)));
}
Sentence Sentence::negation(Sentence s) {
  return HYLOC_SENTENCE(make(Connective::Not, {}, {}, {}, {std::move(s)}));
}
Sentence Sentence::conjunction(Sentence a, Sentence b) {
  return HYLOC_SENTENCE(make(Connective::And, {}, {}, {}, {std::move(a), std::move(b)}));
}
Sentence Sentence::disjunction(Sentence a, Sentence b) {
  return HYLOC_SENTENCE(make(Connective::Or, {}, {}, {}, {std::move(a), std::move(b)}));
}
Sentence Sentence::implication(Sentence a, Sentence b) {
  return HYLOC_SENTENCE(make(Connective::Implies, {}, {}, {}, {std::move(a), std::move(b)}));
}
Sentence Sentence::equivalence(Sentence a, Sentence b) {
  return conjunction(implication(a, b), implication(b, a));
}
Sentence Sentence::box(std::string modality, std::vector<Sentence> args) {
  return HYLOC_SENTENCE(make(Connective::Box, std::move(modality), {}, {}, std::move(args)));
}
Sentence Sentence::diamond(std::string modality, std::vector<Sentence> args) {
  return HYLOC_SENTENCE(make(Connective::Diamond, std::move(modality), {}, {}, std::move(args)));
}
Sentence Sentence::at(std::string nominal, Sentence body) {
  return HYLOC_SENTENCE(make(Connective::At, std::move(nominal), {}, {}, {std::move(body)}));
}
Sentence Sentence::forall_nominal(std::string name, Sentence body) {
  return HYLOC_SENTENCE(make(Connective::ForallNom, std::move(name), {}, {}, {std::move(body)}));
}
Sentence Sentence::exists_nominal(std::string name, Sentence body) {
  return HYLOC_SENTENCE(make(Connective::ExistsNom, std::move(name), {}, {}, {std::move(body)}));
}
Sentence Sentence::forall_rigid(std::string var, std::string sort, Sentence body) {
  return HYLOC_SENTENCE(
      make(Connective::ForallRigid, std::move(var), std::move(sort), {}, {std::move(body)}));
}
Sentence Sentence::exists_rigid(std::string var, std::string sort, Sentence body) {
  return HYLOC_SENTENCE(
      make(Connective::ExistsRigid, std::move(var), std::move(sort), {}, {std::move(body)}));
}

#undef HYLOC_SENTENCE

Connective Sentence::kind() const { return node_->kind; }
const std::string& Sentence::name() const { return node_->name; }
const std::string& Sentence::sort() const { return node_->sort; }
const BaseSentence& Sentence::atom() const { return node_->atom; }
std::span<const Sentence> Sentence::args() const { return node_->args; }

std::size_t Sentence::size() const {
  std::size_t n = 1;
  for (const auto& a : node_->args) n += a.size();
  return n;
}

std::size_t Sentence::depth() const {
  std::size_t d = 0;
  for (const auto& a : node_->args) d = std::max(d, a.depth());
  return d + 1;
}

bool Sentence::is_quantifier() const {
  switch (kind()) {
    case Connective::ForallNom:
    case Connective::ExistsNom:
    case Connective::ForallRigid:
    case Connective::ExistsRigid:
      return true;
    default:
      return false;
  }
}

bool Sentence::binds_nominal() const {
  return kind() == Connective::ForallNom || kind() == Connective::ExistsNom;
}

bool operator==(const Sentence& a, const Sentence& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.sort == y.sort && x.atom == y.atom &&
         x.args == y.args;
}

namespace {

struct Scope {
  std::map<std::string, std::string> rigid;  // var -> sort
  std::set<std::string> nominal_vars;

  bool binds(const std::string& n) const { return rigid.count(n) || nominal_vars.count(n); }
};

class WellformedChecker {
 public:
  explicit WellformedChecker(const HybridSignature& sig) : sig_(sig) {}

  std::vector<SentenceDiagnostic> run(const Sentence& s) {
    Scope scope;
    visit(s, "root", scope);
    return std::move(out_);
  }

 private:
  void report(const std::string& path, std::string msg) {
    out_.push_back(SentenceDiagnostic{path, std::move(msg)});
  }

  bool resolves_nominal(const std::string& n, const Scope& scope) const {
    return sig_.has_nominal(n) || scope.nominal_vars.count(n);
  }

  void check_binder(const std::string& name, const std::string& path, const Scope& scope) {
    if (scope.binds(name)) report(path, fmt::format("'{}' shadows an enclosing binder", name));
    if (sig_.has_nominal(name) || sig_.modalities.count(name) || sig_.base.declares(name))
      report(path, fmt::format("bound name '{}' clashes with a declared symbol", name));
    if (name == kWorldSort) report(path, "'World' cannot be bound");
  }

  void visit(const Sentence& s, const std::string& path, const Scope& scope) {
    auto child = [&](std::size_t i) { return fmt::format("{}.{}", path, i); };
    switch (s.kind()) {
      case Connective::Base:
        try {
          check_sorted(sig_.base, s.atom(), scope.rigid);
        } catch (const Error& e) {
          report(path, e.what());
        }
        return;
      case Connective::Nominal:
        if (!resolves_nominal(s.name(), scope))
          report(path, fmt::format("unknown nominal '{}'", s.name()));
        return;
      case Connective::Not:
      case Connective::And:
      case Connective::Or:
      case Connective::Implies:
        for (std::size_t i = 0; i < s.args().size(); ++i) visit(s.arg(i), child(i), scope);
        return;
      case Connective::Box:
      case Connective::Diamond: {
        int arity = sig_.arity(s.name());
        if (arity == 0) {
          report(path, fmt::format("unknown modality '{}'", s.name()));
        } else if (static_cast<int>(s.args().size()) != arity - 1) {
          report(path, fmt::format("arity mismatch: expected {} argument{} for modality '{}' of "
                                   "arity {}, got {}",
                                   arity - 1, arity - 1 == 1 ? "" : "s", s.name(), arity,
                                   s.args().size()));
        }
        for (std::size_t i = 0; i < s.args().size(); ++i) visit(s.arg(i), child(i), scope);
        return;
      }
      case Connective::At:
        if (!resolves_nominal(s.name(), scope))
          report(path, fmt::format("unknown nominal '{}' in retrieval", s.name()));
        visit(s.arg(0), child(0), scope);
        return;
      case Connective::ForallNom:
      case Connective::ExistsNom: {
        check_binder(s.name(), path, scope);
        Scope inner = scope;
        inner.nominal_vars.insert(s.name());
        visit(s.arg(0), child(0), inner);
        return;
      }
      case Connective::ForallRigid:
      case Connective::ExistsRigid: {
        check_binder(s.name(), path, scope);
        const SortDecl* d = sig_.base.find_sort(s.sort());
        if (!d)
          report(path, fmt::format("unknown sort '{}'", s.sort()));
        else if (!d->rigid)
          report(path, fmt::format("quantified variable '{}' ranges over flexible sort '{}'; "
                                   "only rigid sorts can be quantified",
                                   s.name(), s.sort()));
        Scope inner = scope;
        inner.rigid[s.name()] = s.sort();
        visit(s.arg(0), child(0), inner);
        return;
      }
    }
  }

  const HybridSignature& sig_;
  std::vector<SentenceDiagnostic> out_;
};

void collect_free(const Sentence& s, std::set<std::string>& bound_noms,
                  std::set<std::string>& bound_vars, FreeNames& out) {
  switch (s.kind()) {
    case Connective::Base: {
      std::set<std::string> vars;
      collect_variables(s.atom(), vars);
      for (const auto& v : vars)
        if (!bound_vars.count(v)) out.variables.insert(v);
      return;
    }
    case Connective::Nominal:
      if (!bound_noms.count(s.name())) out.nominals.insert(s.name());
      return;
    case Connective::At:
      if (!bound_noms.count(s.name())) out.nominals.insert(s.name());
      break;
    case Connective::ForallNom:
    case Connective::ExistsNom: {
      bool fresh = bound_noms.insert(s.name()).second;
      collect_free(s.arg(0), bound_noms, bound_vars, out);
      if (fresh) bound_noms.erase(s.name());
      return;
    }
    case Connective::ForallRigid:
    case Connective::ExistsRigid: {
      bool fresh = bound_vars.insert(s.name()).second;
      collect_free(s.arg(0), bound_noms, bound_vars, out);
      if (fresh) bound_vars.erase(s.name());
      return;
    }
    default:
      break;
  }
  for (const auto& a : s.args()) collect_free(a, bound_noms, bound_vars, out);
}

void collect_bound(const Sentence& s, std::set<std::string>& out) {
  if (s.is_quantifier()) out.insert(s.name());
  for (const auto& a : s.args()) collect_bound(a, out);
}

}  // namespace

std::vector<SentenceDiagnostic> check_wellformed(const HybridSignature& sig, const Sentence& s) {
  return WellformedChecker(sig).run(s);
}

FreeNames free_names(const Sentence& s) {
  FreeNames out;
  std::set<std::string> noms, vars;
  collect_free(s, noms, vars, out);
  return out;
}

std::set<std::string> bound_names(const Sentence& s) {
  std::set<std::string> out;
  collect_bound(s, out);
  return out;
}

HybridMorphism HybridMorphism::identity(const HybridSignature& sig) { return inclusion(sig, sig); }

HybridMorphism HybridMorphism::inclusion(const HybridSignature& source,
                                         const HybridSignature& target) {
  HybridMorphism phi;
  phi.source = source;
  phi.target = target;
  phi.base = SignatureMorphism::inclusion(source.base, target.base);
  return phi;
}

std::string HybridMorphism::map_nominal(const std::string& n) const {
  if (!source.has_nominal(n))
    throw SymbolNotInDomain(fmt::format("nominal '{}' is not in the morphism's source", n));
  auto it = nominal_map.find(n);
  if (it != nominal_map.end()) return it->second;
  if (!target.has_nominal(n))
    throw SymbolNotInDomain(fmt::format("nominal '{}' has no image in the target", n));
  return n;
}

std::string HybridMorphism::map_modality(const std::string& m) const {
  if (!source.modalities.count(m))
    throw SymbolNotInDomain(fmt::format("modality '{}' is not in the morphism's source", m));
  auto it = modality_map.find(m);
  if (it != modality_map.end()) return it->second;
  if (!target.modalities.count(m))
    throw SymbolNotInDomain(fmt::format("modality '{}' has no image in the target", m));
  return m;
}

std::vector<std::string> validate(const HybridMorphism& phi) {
  std::vector<std::string> out = validate(phi.base);
  if (!(phi.base.source == phi.source.base) || !(phi.base.target == phi.target.base))
    out.push_back("base morphism does not connect the hybrid signatures' bases");
  for (const auto& n : phi.source.nominals) {
    try {
      if (!phi.target.has_nominal(phi.map_nominal(n)))
        out.push_back(fmt::format("image of nominal '{}' is not in the target", n));
    } catch (const Error& e) {
      out.emplace_back(e.what());
    }
  }
  for (const auto& [m, arity] : phi.source.modalities) {
    try {
      if (phi.target.arity(phi.map_modality(m)) != arity)
        out.push_back(fmt::format("modality '{}' is mapped to a modality of different arity", m));
    } catch (const Error& e) {
      out.emplace_back(e.what());
    }
  }
  return out;
}

namespace {

class Translator {
 public:
  Translator(const HybridMorphism& phi, const Sentence& root) : phi_(phi) {
    taken_ = bound_names(root);
    for (const auto& n : phi.target.nominals) taken_.insert(n);
    for (const auto& [m, a] : phi.target.modalities) taken_.insert(m);
    const auto& b = phi.target.base;
    taken_.insert(b.atoms.begin(), b.atoms.end());
    for (const auto& [n, d] : b.sorts) taken_.insert(n);
    for (const auto& [n, d] : b.ops) taken_.insert(n);
    for (const auto& [n, d] : b.rels) taken_.insert(n);
  }

  Sentence run(const Sentence& s) { return visit(s, {}); }

 private:
  using Renaming = std::map<std::string, std::string>;

  bool clashes_with_target(const std::string& n) const {
    const auto& t = phi_.target;
    return t.has_nominal(n) || t.modalities.count(n) || t.base.declares(n) || n == kWorldSort;
  }

  std::string binder_name(const std::string& n) {
    if (!clashes_with_target(n)) return n;
    for (int i = 1;; ++i) {
      auto candidate = fmt::format("{}_{}", n, i);
      if (!taken_.count(candidate)) {
        taken_.insert(candidate);
        return candidate;
      }
    }
  }

  Term rename_term(const Term& t, const Renaming& r) const {
    if (t.is_var()) {
      auto it = r.find(t.name);
      return it == r.end() ? t : Term::var(it->second);
    }
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(rename_term(a, r));
    return Term::app(phi_.base.map_op(t.name), std::move(args));
  }

  std::string nominal(const std::string& n, const Renaming& r) const {
    auto it = r.find(n);
    return it != r.end() ? it->second : phi_.map_nominal(n);
  }

  Sentence visit(const Sentence& s, const Renaming& r) {
    auto all = [&] {
      std::vector<Sentence> v;
      for (const auto& a : s.args()) v.push_back(visit(a, r));
      return v;
    };
    switch (s.kind()) {
      case Connective::Base: {
        const BaseSentence& a = s.atom();
        if (a.kind == BaseSentence::Kind::Prop)
          return Sentence::base(BaseSentence::prop(phi_.base.map_atom(a.symbol)));
        std::vector<Term> terms;
        for (const auto& t : a.args) terms.push_back(rename_term(t, r));
        if (a.kind == BaseSentence::Kind::Equation)
          return Sentence::base(BaseSentence::equation(terms[0], terms[1]));
        return Sentence::base(BaseSentence::relation(phi_.base.map_rel(a.symbol), terms));
      }
      case Connective::Nominal:
        return Sentence::nominal(nominal(s.name(), r));
      case Connective::Not:
        return Sentence::negation(visit(s.arg(0), r));
      case Connective::And: {
        auto v = all();
        return Sentence::conjunction(v[0], v[1]);
      }
      case Connective::Or: {
        auto v = all();
        return Sentence::disjunction(v[0], v[1]);
      }
      case Connective::Implies: {
        auto v = all();
        return Sentence::implication(v[0], v[1]);
      }
      case Connective::Box:
        return Sentence::box(phi_.map_modality(s.name()), all());
      case Connective::Diamond:
        return Sentence::diamond(phi_.map_modality(s.name()), all());
      case Connective::At:
        return Sentence::at(nominal(s.name(), r), visit(s.arg(0), r));
      case Connective::ForallNom:
      case Connective::ExistsNom: {
        Renaming inner = r;
        auto fresh = binder_name(s.name());
        inner[s.name()] = fresh;
        auto body = visit(s.arg(0), inner);
        return s.kind() == Connective::ForallNom ? Sentence::forall_nominal(fresh, body)
                                                 : Sentence::exists_nominal(fresh, body);
      }
      case Connective::ForallRigid:
      case Connective::ExistsRigid: {
        Renaming inner = r;
        auto fresh = binder_name(s.name());
        inner[s.name()] = fresh;
        auto body = visit(s.arg(0), inner);
        auto sort = phi_.base.map_sort(s.sort());
        return s.kind() == Connective::ForallRigid ? Sentence::forall_rigid(fresh, sort, body)
                                                   : Sentence::exists_rigid(fresh, sort, body);
      }
    }
    return s;
  }

  const HybridMorphism& phi_;
  std::set<std::string> taken_;
};

}  // namespace

Sentence translate_hybrid(const HybridMorphism& phi, const Sentence& s) {
  return Translator(phi, s).run(s);
}

}  // namespace hyloc
