#include "hyloc/countermodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "hyloc/error.hpp"

namespace hyloc {

namespace {

// One digit of the mixed-radix candidate index.
struct Slot {
  enum class Kind { RelationTuple, Nominal, Atom, OpEntry, RelEntry };
  Kind kind;
  int radix = 2;
  std::string symbol;
  int world = -1;              // -1: rigid, written to every world
  std::vector<int> tuple;      // relation/world tuple
  std::size_t row = 0;         // op table row
};

std::vector<std::vector<int>> all_tuples(const std::vector<int>& sizes) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(sizes.size(), 0);
  for (int s : sizes)
    if (s == 0) return out;
  for (;;) {
    out.push_back(cur);
    int i = static_cast<int>(sizes.size()) - 1;
    for (; i >= 0; --i) {
      if (++cur[static_cast<std::size_t>(i)] < sizes[static_cast<std::size_t>(i)]) break;
      cur[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) return out;
  }
}

// All candidates with a fixed world count and carrier sizes.
class Layer {
 public:
  Layer(std::shared_ptr<const HybridSignature> sig, int worlds,
        const std::map<std::string, std::vector<int>>& carrier_sizes)
      : sig_(std::move(sig)) {
    const HybridSignature& s = *sig_;
    skeleton_.signature = sig_;
    for (int w = 0; w < worlds; ++w) skeleton_.worlds.push_back(fmt::format("w{}", w));
    skeleton_.local.resize(static_cast<std::size_t>(worlds));
    for (int w = 0; w < worlds; ++w) {
      BaseModel& loc = skeleton_.local[static_cast<std::size_t>(w)];
      for (const auto& a : s.base.atoms) loc.valuation[a] = false;
      for (const auto& [sort, sizes] : carrier_sizes) {
        auto& c = loc.carriers[sort];
        for (int e = 0; e < sizes[static_cast<std::size_t>(w)]; ++e) c.push_back(fmt::format("e{}", e));
      }
      for (const auto& [name, op] : s.base.ops)
        loc.ops[name] = std::vector<int>(table_rows(loc, op.args), 0);
      for (const auto& [name, rel] : s.base.rels) loc.rels[name] = {};
    }
    for (const auto& [m, arity] : s.modalities) {
      skeleton_.relations[m] = {};
      for (auto& t : all_tuples(std::vector<int>(static_cast<std::size_t>(arity), worlds)))
        slots_.push_back(Slot{Slot::Kind::RelationTuple, 2, m, -1, t, 0});
    }
    for (const auto& n : s.nominals) slots_.push_back(Slot{Slot::Kind::Nominal, worlds, n, -1, {}, 0});
    for (int w = 0; w < worlds; ++w)
      for (const auto& a : s.base.atoms) slots_.push_back(Slot{Slot::Kind::Atom, 2, a, w, {}, 0});
    add_tables(worlds);
  }

  double size() const {
    double n = 1;
    for (const auto& sl : slots_) n *= sl.radix;
    return n;
  }

  KripkeModel decode(std::uint64_t index) const {
    std::vector<int> digits(slots_.size());
    for (std::size_t i = slots_.size(); i-- > 0;) {
      const auto r = static_cast<std::uint64_t>(slots_[i].radix);
      digits[i] = static_cast<int>(index % r);
      index /= r;
    }
    KripkeModel m = skeleton_;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      const Slot& sl = slots_[i];
      const int d = digits[i];
      switch (sl.kind) {
        case Slot::Kind::RelationTuple:
          if (d) m.relations[sl.symbol].insert(sl.tuple);
          break;
        case Slot::Kind::Nominal:
          m.nominal_at[sl.symbol] = d;
          break;
        case Slot::Kind::Atom:
          m.local[static_cast<std::size_t>(sl.world)].valuation[sl.symbol] = d != 0;
          break;
        case Slot::Kind::OpEntry:
          for_worlds(m, sl.world, [&](BaseModel& loc) { loc.ops[sl.symbol][sl.row] = d; });
          break;
        case Slot::Kind::RelEntry:
          if (d) for_worlds(m, sl.world, [&](BaseModel& loc) { loc.rels[sl.symbol].insert(sl.tuple); });
          break;
      }
    }
    return m;
  }

 private:
  template <typename F>
  static void for_worlds(KripkeModel& m, int world, F&& f) {
    if (world >= 0) {
      f(m.local[static_cast<std::size_t>(world)]);
      return;
    }
    for (auto& loc : m.local) f(loc);
  }

  void add_tables(int worlds) {
    const BaseSignature& b = sig_->base;
    auto sizes_at = [&](const std::vector<std::string>& sorts, int w) {
      std::vector<int> out;
      for (const auto& s : sorts) out.push_back(skeleton_.local[static_cast<std::size_t>(w)].carrier_size(s));
      return out;
    };
    auto add_op = [&](const OpDecl& op, int w) {
      const BaseModel& loc = skeleton_.local[static_cast<std::size_t>(w < 0 ? 0 : w)];
      const std::size_t rows = table_rows(loc, op.args);
      for (std::size_t r = 0; r < rows; ++r)
        slots_.push_back(Slot{Slot::Kind::OpEntry, loc.carrier_size(op.result), op.name, w, {}, r});
    };
    auto add_rel = [&](const RelDecl& rel, int w) {
      for (auto& t : all_tuples(sizes_at(rel.args, w < 0 ? 0 : w)))
        slots_.push_back(Slot{Slot::Kind::RelEntry, 2, rel.name, w, t, 0});
    };
    // Per-world (flexible) tables first, shared rigid tables last.
    for (int w = 0; w < worlds; ++w) {
      for (const auto& [name, op] : b.ops)
        if (!op.rigid) add_op(op, w);
      for (const auto& [name, rel] : b.rels)
        if (!rel.rigid) add_rel(rel, w);
    }
    for (const auto& [name, op] : b.ops)
      if (op.rigid) add_op(op, -1);
    for (const auto& [name, rel] : b.rels)
      if (rel.rigid) add_rel(rel, -1);
  }

  std::shared_ptr<const HybridSignature> sig_;
  KripkeModel skeleton_;
  std::vector<Slot> slots_;
};

// Carrier size assignments for `worlds` worlds, rigid sorts most significant.
std::vector<std::map<std::string, std::vector<int>>> carrier_configs(const BaseSignature& b,
                                                                    int worlds, int max_carrier) {
  struct Position {
    std::string sort;
    int world;  // -1: rigid, shared by all worlds
  };
  std::vector<Position> pos;
  for (const auto& [name, s] : b.sorts)
    if (s.rigid) pos.push_back({name, -1});
  for (const auto& [name, s] : b.sorts)
    if (!s.rigid)
      for (int w = 0; w < worlds; ++w) pos.push_back({name, w});

  std::vector<std::map<std::string, std::vector<int>>> out;
  for (auto& sizes : all_tuples(std::vector<int>(pos.size(), max_carrier))) {
    std::map<std::string, std::vector<int>> cfg;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      auto& v = cfg[pos[i].sort];
      v.resize(static_cast<std::size_t>(worlds), 0);
      if (pos[i].world < 0)
        std::fill(v.begin(), v.end(), sizes[i] + 1);
      else
        v[static_cast<std::size_t>(pos[i].world)] = sizes[i] + 1;
    }
    out.push_back(std::move(cfg));
  }
  return out;
}

void check_inputs(const HybridSignature& sig, const ConstraintSet& cs,
                  std::span<const Sentence> premises, const Sentence& goal,
                  const SearchBounds& bounds) {
  if (bounds.max_worlds < 1 || bounds.max_carrier < 1)
    throw std::invalid_argument("search bounds must be at least 1");
  if (auto problems = validate(sig); !problems.empty())
    throw Error("ill-formed signature: " + problems.front());
  if (auto problems = validate(sig, cs); !problems.empty())
    throw Error("ill-formed constraints: " + problems.front());
  auto check = [&](const Sentence& s) {
    if (auto d = check_wellformed(sig, s); !d.empty())
      throw Error("ill-formed sentence: " + d.front().message);
    auto fn = free_names(s);
    if (!fn.variables.empty()) throw Error("sentence has free variables");
  };
  for (const auto& p : premises) check(p);
  check(goal);
  double space = search_space_size(sig, bounds);
  if (space > bounds.max_candidates)
    throw BoundsTooLarge(fmt::format("search space of {:.3g} candidates exceeds the cap of {:.3g}",
                                     space, bounds.max_candidates));
}

bool cancelled(const SearchBounds& bounds) {
  return bounds.cancel && bounds.cancel->load(std::memory_order_relaxed);
}

// Returns the falsifying world when the candidate is a countermodel.
std::optional<int> test_candidate(const KripkeModel& m, const ConstraintSet& cs,
                                  std::span<const Sentence> premises, const Sentence& goal) {
  if (!check_constraints(m, cs).empty()) return std::nullopt;
  for (const auto& p : premises)
    if (!sat_global(m, p)) return std::nullopt;
  return first_failing_world(m, goal);
}

template <typename LayerScan>
std::optional<Countermodel> search(const HybridSignature& sig, const ConstraintSet& cs,
                                   std::span<const Sentence> premises, const Sentence& goal,
                                   const SearchBounds& bounds, LayerScan&& scan) {
  check_inputs(sig, cs, premises, goal, bounds);
  auto shared = std::make_shared<const HybridSignature>(sig);
  std::uint64_t examined = 0;
  for (int w = 1; w <= bounds.max_worlds; ++w) {
    for (const auto& cfg : carrier_configs(sig.base, w, bounds.max_carrier)) {
      Layer layer(shared, w, cfg);
      const auto n = static_cast<std::uint64_t>(layer.size());
      if (auto hit = scan(layer, n)) {
        KripkeModel m = layer.decode(*hit);
        int world = *test_candidate(m, cs, premises, goal);
        return Countermodel{std::move(m), world, examined + *hit + 1};
      }
      examined += n;
    }
  }
  return std::nullopt;
}

}  // namespace

double search_space_size(const HybridSignature& sig, const SearchBounds& bounds) {
  auto shared = std::make_shared<const HybridSignature>(sig);
  double total = 0;
  for (int w = 1; w <= bounds.max_worlds; ++w) {
    for (const auto& cfg : carrier_configs(sig.base, w, bounds.max_carrier)) {
      total += Layer(shared, w, cfg).size();
      if (!std::isfinite(total) || total > 1e300) return std::numeric_limits<double>::infinity();
    }
  }
  return total;
}

std::optional<Countermodel> find_countermodel_reference(const HybridSignature& sig,
                                                        const ConstraintSet& cs,
                                                        std::span<const Sentence> premises,
                                                        const Sentence& goal,
                                                        const SearchBounds& bounds) {
  return search(sig, cs, premises, goal, bounds,
                [&](const Layer& layer, std::uint64_t n) -> std::optional<std::uint64_t> {
                  for (std::uint64_t i = 0; i < n; ++i) {
                    if (i % 4096 == 0 && cancelled(bounds)) return std::nullopt;
                    if (test_candidate(layer.decode(i), cs, premises, goal)) return i;
                  }
                  return std::nullopt;
                });
}

std::optional<Countermodel> find_countermodel(const HybridSignature& sig, const ConstraintSet& cs,
                                              std::span<const Sentence> premises,
                                              const Sentence& goal, const SearchBounds& bounds) {
  constexpr std::uint64_t kBlock = 4096;
  return search(
      sig, cs, premises, goal, bounds,
      [&](const Layer& layer, std::uint64_t n) -> std::optional<std::uint64_t> {
        for (std::uint64_t start = 0; start < n; start += kBlock) {
          if (cancelled(bounds)) return std::nullopt;
          const auto begin = static_cast<std::int64_t>(start);
          const auto end = static_cast<std::int64_t>(std::min(n, start + kBlock));
          std::int64_t best = end;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
          for (std::int64_t i = begin; i < end; ++i) {
            if (i >= best) continue;
            if (test_candidate(layer.decode(static_cast<std::uint64_t>(i)), cs, premises, goal))
              best = i;
          }
          if (best < end) return static_cast<std::uint64_t>(best);
        }
        return std::nullopt;
      });
}

}  // namespace hyloc
