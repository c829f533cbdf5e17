#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hyloc/syntax.hpp"
#include "lexer.hpp"

// Model files are line oriented:
//
//   worlds s, m
//   relation shift : (s, m), (m, s)
//   nominal sum = s
//   carrier Nat = 0, 1, 2            rigid sorts, ops and preds are given once
//   op suc : (0) -> 1, (1) -> 2, (2) -> 0
//   rel lt : (0, 1)
//   in s op X : (0, 0) -> 0, ...     flexible symbols are given per world
//   in s props p, q                  atoms true at s
//
// A rigid symbol may instead be given per world in every world; the loaded
// model is then checked for rigidity sharing.

namespace hyloc {

using detail::Abort;
using detail::Cursor;
using detail::Stop;
using detail::Token;

namespace {

constexpr int kAllWorlds = -1;

class ModelReader {
 public:
  ModelReader(std::string_view text, std::shared_ptr<const HybridSignature> sig, const ParseOptions& options)
      : in_(text, options), sig_(std::move(sig)) {}

  ModelParseResult run() {
    ModelParseResult result;
    if (in_.error_count() == 0) {
      try {
        while (!in_.at_end()) {
          try {
            statement();
            if (!in_.peek().line_start)
              in_.fail(in_.peek(), fmt::format("unexpected {} at end of statement", Cursor::describe(in_.peek())));
          } catch (const Abort&) {
            in_.recover();
          }
        }
        if (!have_worlds_) in_.report(in_.peek(), "missing 'worlds' line");
        else finish(result);
      } catch (const Stop&) {
      }
    }
    result.diagnostics = in_.take_diagnostics();
    if (!result.diagnostics.empty()) result.model.reset();
    return result;
  }

 private:
  struct Local {
    std::map<std::string, std::vector<std::string>> carriers;
    std::map<std::string, std::map<std::vector<int>, int>> ops;
    std::map<std::string, std::set<std::vector<int>>> rels;
    std::set<std::string> props;
  };

  struct Entry {
    std::vector<Token> args;
    Token result;
  };

  const BaseSignature& base() const { return sig_->base; }

  int world(const Token& t) {
    auto it = std::find(worlds_.begin(), worlds_.end(), t.text);
    if (it == worlds_.end()) in_.fail(t, fmt::format("unknown world '{}'", t.text));
    return static_cast<int>(it - worlds_.begin());
  }

  std::vector<Token> names() {
    std::vector<Token> out;
    out.push_back(in_.expect_name("a name"));
    while (in_.accept(",")) out.push_back(in_.expect_name("a name"));
    return out;
  }

  // Parenthesized, comma separated names; the opening parenthesis is next.
  std::vector<Token> tuple() {
    in_.expect("(", "to open a tuple");
    std::vector<Token> out;
    if (in_.accept(")")) return out;
    out.push_back(in_.expect_name("an element"));
    while (in_.accept(",")) out.push_back(in_.expect_name("an element"));
    in_.expect(")", "to close the tuple");
    return out;
  }

  bool more_on_line() const { return !in_.peek().line_start; }

  void statement() {
    const Token& kw = in_.peek();
    if (!have_worlds_ && !kw.is("worlds")) in_.fail(kw, "the 'worlds' line must come first");
    if (kw.is("worlds")) {
      in_.next();
      if (have_worlds_) in_.fail(kw, "'worlds' given twice");
      for (const auto& w : names()) {
        if (std::count(worlds_.begin(), worlds_.end(), w.text))
          in_.fail(w, fmt::format("duplicate world '{}'", w.text));
        worlds_.push_back(w.text);
      }
      have_worlds_ = true;
      local_.resize(worlds_.size());
      return;
    }
    if (kw.is("relation")) return relation();
    if (kw.is("nominal")) return nominal();
    if (kw.is("in")) {
      in_.next();
      int w = world(in_.expect_name("a world name"));
      const Token& what = in_.peek();
      if (what.is("carrier")) return carrier(w);
      if (what.is("op")) return op(w);
      if (what.is("rel")) return rel(w);
      if (what.is("props")) return props(w);
      in_.fail(what, fmt::format("expected 'carrier', 'op', 'rel' or 'props', found {}", Cursor::describe(what)));
    }
    if (kw.is("carrier")) return carrier(kAllWorlds);
    if (kw.is("op")) return op(kAllWorlds);
    if (kw.is("rel")) return rel(kAllWorlds);
    if (kw.is("props"))
      in_.fail(kw, "propositions are given per world: 'in <world> props ...'");
    in_.fail(kw, fmt::format("unexpected {}", Cursor::describe(kw)));
  }

  void relation() {
    in_.next();
    const Token& m = in_.expect_name("a modality name");
    int arity = sig_->arity(m.text);
    if (arity == 0) in_.fail(m, fmt::format("unknown modality '{}'", m.text));
    if (relations_.count(m.text)) in_.fail(m, fmt::format("relation '{}' given twice", m.text));
    in_.expect(":", "after the modality name");
    auto& tuples = relations_[m.text];
    if (!more_on_line()) return;
    do {
      const Token& open = in_.peek();
      auto t = tuple();
      if (static_cast<int>(t.size()) != arity)
        in_.fail(open, fmt::format("relation '{}' has width {}, tuple has {} world(s)", m.text, arity, t.size()));
      WorldTuple wt;
      for (const auto& w : t) wt.push_back(world(w));
      tuples.insert(wt);
    } while (in_.accept(","));
  }

  void nominal() {
    in_.next();
    const Token& n = in_.expect_name("a nominal name");
    if (!sig_->has_nominal(n.text)) in_.fail(n, fmt::format("unknown nominal '{}'", n.text));
    if (nominal_at_.count(n.text)) in_.fail(n, fmt::format("nominal '{}' assigned twice", n.text));
    in_.expect("=", "after the nominal name");
    nominal_at_[n.text] = world(in_.expect_name("a world name"));
  }

  // Records where `symbol` is declared and returns the worlds to fill.
  std::vector<int> declare(const Token& at, const std::string& kind, const std::string& symbol, bool rigid,
                           int w) {
    if (w == kAllWorlds && !rigid)
      in_.fail(at, fmt::format("{} '{}' is flexible; give it per world with 'in <world> {}'", kind, symbol,
                               kind == "sort" ? "carrier" : kind));
    if (w == kAllWorlds) {
      if (global_.count(symbol)) in_.fail(at, fmt::format("{} '{}' given twice", kind, symbol));
      for (const auto& [lw, sym] : local_decl_)
        if (sym == symbol) in_.fail(at, fmt::format("rigid {} '{}' redeclared per world", kind, symbol));
      global_.insert(symbol);
      std::vector<int> all(worlds_.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      return all;
    }
    if (global_.count(symbol)) in_.fail(at, fmt::format("rigid {} '{}' redeclared per world", kind, symbol));
    if (!local_decl_.insert({w, symbol}).second)
      in_.fail(at, fmt::format("{} '{}' given twice at world '{}'", kind, symbol, worlds_[w]));
    return {w};
  }

  void carrier(int w) {
    in_.next();
    const Token& s = in_.expect_name("a sort name");
    const SortDecl* d = base().find_sort(s.text);
    if (!d) in_.fail(s, fmt::format("unknown sort '{}'", s.text));
    in_.expect("=", "after the sort name");
    std::vector<std::string> elems;
    for (const auto& e : names()) {
      if (std::count(elems.begin(), elems.end(), e.text))
        in_.fail(e, fmt::format("duplicate element '{}' in carrier of '{}'", e.text, s.text));
      elems.push_back(e.text);
    }
    for (int target : declare(s, "sort", s.text, d->rigid, w)) local_[target].carriers[s.text] = elems;
  }

  int element(int w, const std::string& sort, const Token& t, const std::string& symbol) {
    auto& carriers = local_[w].carriers;
    auto it = carriers.find(sort);
    if (it == carriers.end())
      in_.fail(t, fmt::format("carrier of sort '{}' must be given before '{}' at world '{}'", sort, symbol,
                              worlds_[w]));
    auto pos = std::find(it->second.begin(), it->second.end(), t.text);
    if (pos == it->second.end())
      in_.fail(t, fmt::format("'{}' is not an element of sort '{}' at world '{}'", t.text, sort, worlds_[w]));
    return static_cast<int>(pos - it->second.begin());
  }

  void op(int w) {
    in_.next();
    const Token& f = in_.expect_name("an operation name");
    const OpDecl* d = base().find_op(f.text);
    if (!d) in_.fail(f, fmt::format("unknown operation '{}'", f.text));
    in_.expect(":", "after the operation name");
    std::vector<Entry> entries;
    do {
      const Token& open = in_.peek();
      auto args = tuple();
      if (args.size() != d->args.size())
        in_.fail(open, fmt::format("operation '{}' takes {} argument(s), row has {}", f.text, d->args.size(),
                                   args.size()));
      in_.expect("->", "after the argument tuple");
      entries.push_back(Entry{std::move(args), in_.expect_name("a result element")});
    } while (in_.accept(","));
    for (int target : declare(f, "op", f.text, d->rigid, w)) {
      auto& table = local_[target].ops[f.text];
      for (const auto& e : entries) {
        std::vector<int> row;
        for (std::size_t i = 0; i < e.args.size(); ++i) row.push_back(element(target, d->args[i], e.args[i], f.text));
        int value = element(target, d->result, e.result, f.text);
        if (!table.emplace(row, value).second)
          in_.fail(e.result, fmt::format("operation '{}' defined twice on the same arguments", f.text));
      }
    }
  }

  void rel(int w) {
    in_.next();
    const Token& r = in_.expect_name("a predicate name");
    const RelDecl* d = base().find_rel(r.text);
    if (!d) in_.fail(r, fmt::format("unknown predicate '{}'", r.text));
    in_.expect(":", "after the predicate name");
    std::vector<std::pair<Token, std::vector<Token>>> tuples;
    if (more_on_line()) {
      do {
        const Token& open = in_.peek();
        auto t = tuple();
        if (t.size() != d->args.size())
          in_.fail(open, fmt::format("predicate '{}' takes {} argument(s), tuple has {}", r.text, d->args.size(),
                                     t.size()));
        tuples.emplace_back(open, std::move(t));
      } while (in_.accept(","));
    }
    for (int target : declare(r, "rel", r.text, d->rigid, w)) {
      auto& rows = local_[target].rels[r.text];
      for (const auto& [open, t] : tuples) {
        std::vector<int> row;
        for (std::size_t i = 0; i < t.size(); ++i) row.push_back(element(target, d->args[i], t[i], r.text));
        rows.insert(row);
      }
    }
  }

  void props(int w) {
    const Token& kw = in_.next();
    if (base().kind != BaseKind::Prop) in_.fail(kw, "'props' requires the propositional base logic");
    declare(kw, "props", "props", false, w);
    if (!more_on_line()) return;
    for (const auto& p : names()) {
      if (!base().has_atom(p.text)) in_.fail(p, fmt::format("unknown proposition '{}'", p.text));
      local_[w].props.insert(p.text);
    }
  }

  void finish(ModelParseResult& result) {
    const Token& end = in_.peek();
    for (const auto& n : sig_->nominals)
      if (!nominal_at_.count(n)) in_.report(end, fmt::format("nominal '{}' unassigned", n));

    KripkeModel model;
    model.signature = sig_;
    model.worlds = worlds_;
    model.nominal_at = nominal_at_;
    for (const auto& [m, arity] : sig_->modalities) model.relations[m] = relations_[m];

    for (std::size_t w = 0; w < worlds_.size(); ++w) {
      const Local& l = local_[w];
      BaseModel bm;
      for (const auto& a : base().atoms) bm.valuation[a] = l.props.count(a) > 0;
      for (const auto& [s, d] : base().sorts) {
        auto it = l.carriers.find(s);
        if (it == l.carriers.end()) {
          in_.report(end, fmt::format("no carrier for sort '{}' at world '{}'", s, worlds_[w]));
          continue;
        }
        bm.carriers[s] = it->second;
      }
      if (bm.carriers.size() != base().sorts.size()) continue;
      for (const auto& [f, d] : base().ops) {
        auto it = l.ops.find(f);
        std::size_t rows = table_rows(bm, d.args);
        std::vector<int> table(rows, 0);
        std::vector<bool> seen(rows, false);
        if (it != l.ops.end()) {
          for (const auto& [args, value] : it->second) {
            std::size_t idx = table_index(bm, d.args, args);
            table[idx] = value;
            seen[idx] = true;
          }
        }
        auto missing = std::find(seen.begin(), seen.end(), false);
        if (missing != seen.end()) {
          auto row = static_cast<std::size_t>(missing - seen.begin());
          std::vector<std::string> args(d.args.size());
          for (std::size_t i = d.args.size(); i-- > 0;) {
            auto size = static_cast<std::size_t>(bm.carrier_size(d.args[i]));
            args[i] = bm.carriers[d.args[i]][row % size];
            row /= size;
          }
          in_.report(end, fmt::format("operation '{}' at world '{}' is undefined on ({})", f, worlds_[w],
                                      fmt::join(args, ", ")));
        }
        bm.ops[f] = std::move(table);
      }
      for (const auto& [r, d] : base().rels) {
        auto it = l.rels.find(r);
        bm.rels[r] = it == l.rels.end() ? std::set<std::vector<int>>{} : it->second;
      }
      model.local.push_back(std::move(bm));
    }
    if (in_.error_count() > 0) return;
    for (const auto& problem : check_structure(model)) in_.report(end, problem);
    if (in_.error_count() > 0) return;
    result.violations = check_constraints(model, ConstraintSet{});
    result.model = std::move(model);
  }

  Cursor in_;
  std::shared_ptr<const HybridSignature> sig_;
  bool have_worlds_ = false;
  std::vector<std::string> worlds_;
  std::map<std::string, std::set<WorldTuple>> relations_;
  std::map<std::string, int> nominal_at_;
  std::vector<Local> local_;
  std::set<std::string> global_;
  std::set<std::pair<int, std::string>> local_decl_;
};

std::string tuple_text(const std::vector<std::string>& names) {
  return fmt::format("({})", fmt::join(names, ", "));
}

std::string op_rows(const BaseModel& m, const OpDecl& d, const std::vector<int>& table) {
  std::vector<std::string> rows;
  const auto& result = m.carriers.at(d.result);
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::vector<std::string> args(d.args.size());
    std::size_t rest = r;
    for (std::size_t i = d.args.size(); i-- > 0;) {
      const auto& carrier = m.carriers.at(d.args[i]);
      args[i] = carrier[rest % carrier.size()];
      rest /= carrier.size();
    }
    rows.push_back(fmt::format("{} -> {}", tuple_text(args), result.at(static_cast<std::size_t>(table[r]))));
  }
  return fmt::format("{}", fmt::join(rows, ", "));
}

std::string rel_rows(const BaseModel& m, const RelDecl& d, const std::set<std::vector<int>>& rows) {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < row.size(); ++i)
      names.push_back(m.carriers.at(d.args[i]).at(static_cast<std::size_t>(row[i])));
    out.push_back(tuple_text(names));
  }
  return fmt::format("{}", fmt::join(out, ", "));
}

}  // namespace

ModelParseResult parse_model(std::string_view text, std::shared_ptr<const HybridSignature> sig,
                             const ParseOptions& options) {
  return ModelReader(text, std::move(sig), options).run();
}

std::string print_model(const KripkeModel& model) {
  const HybridSignature& sig = *model.signature;
  const BaseSignature& base = sig.base;
  std::ostringstream os;
  os << "worlds " << fmt::format("{}", fmt::join(model.worlds, ", ")) << "\n";
  for (const auto& [m, arity] : sig.modalities) {
    std::vector<std::string> tuples;
    for (const auto& t : model.relation(m)) {
      std::vector<std::string> names;
      for (int w : t) names.push_back(model.worlds.at(static_cast<std::size_t>(w)));
      tuples.push_back(tuple_text(names));
    }
    os << "relation " << m << " :";
    if (!tuples.empty()) os << " " << fmt::format("{}", fmt::join(tuples, ", "));
    os << "\n";
  }
  for (const auto& [n, w] : model.nominal_at)
    os << "nominal " << n << " = " << model.worlds.at(static_cast<std::size_t>(w)) << "\n";

  // Rigid symbols are printed once when every world agrees on them.
  auto shared = [&](auto member, const std::string& name) {
    for (const auto& l : model.local)
      if ((l.*member).at(name) != (model.local.front().*member).at(name)) return false;
    return true;
  };
  auto shared_carriers = [&](const std::vector<std::string>& sorts) {
    for (const auto& s : sorts)
      if (!shared(&BaseModel::carriers, s)) return false;
    return true;
  };
  std::set<std::string> global;
  if (!model.local.empty()) {
    const BaseModel& first = model.local.front();
    for (const auto& [s, d] : base.sorts) {
      if (!d.rigid || !shared(&BaseModel::carriers, s)) continue;
      global.insert(s);
      os << "carrier " << s << " = " << fmt::format("{}", fmt::join(first.carriers.at(s), ", ")) << "\n";
    }
    for (const auto& [f, d] : base.ops) {
      auto sorts = d.args;
      sorts.push_back(d.result);
      if (!d.rigid || !shared(&BaseModel::ops, f) || !shared_carriers(sorts)) continue;
      bool all_global = std::all_of(sorts.begin(), sorts.end(), [&](const auto& s) { return global.count(s) > 0; });
      if (!all_global) continue;
      global.insert(f);
      os << "op " << f << " : " << op_rows(first, d, first.ops.at(f)) << "\n";
    }
    for (const auto& [r, d] : base.rels) {
      if (!d.rigid || !shared(&BaseModel::rels, r)) continue;
      bool all_global =
          std::all_of(d.args.begin(), d.args.end(), [&](const auto& s) { return global.count(s) > 0; });
      if (!all_global) continue;
      global.insert(r);
      os << "rel " << r << " :";
      auto rows = rel_rows(first, d, first.rels.at(r));
      if (!rows.empty()) os << " " << rows;
      os << "\n";
    }
  }
  for (std::size_t w = 0; w < model.local.size(); ++w) {
    const BaseModel& l = model.local[w];
    const std::string& name = model.worlds[w];
    for (const auto& [s, d] : base.sorts)
      if (!global.count(s)) os << "in " << name << " carrier " << s << " = " << fmt::format("{}", fmt::join(l.carriers.at(s), ", ")) << "\n";
    for (const auto& [f, d] : base.ops)
      if (!global.count(f)) os << "in " << name << " op " << f << " : " << op_rows(l, d, l.ops.at(f)) << "\n";
    for (const auto& [r, d] : base.rels) {
      if (global.count(r)) continue;
      os << "in " << name << " rel " << r << " :";
      auto rows = rel_rows(l, d, l.rels.at(r));
      if (!rows.empty()) os << " " << rows;
      os << "\n";
    }
    if (base.kind == BaseKind::Prop) {
      std::vector<std::string> trues;
      for (const auto& [a, v] : l.valuation)
        if (v) trues.push_back(a);
      if (!trues.empty()) os << "in " << name << " props " << fmt::format("{}", fmt::join(trues, ", ")) << "\n";
    }
  }
  return os.str();
}

}  // namespace hyloc
