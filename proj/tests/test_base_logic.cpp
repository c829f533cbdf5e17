#include <gtest/gtest.h>

#include "generators.hpp"
#include "hyloc/base_logic.hpp"
#include "hyloc/error.hpp"

namespace hyloc {
namespace {

using testing::Rng;

// Z5 with suc = +1 and plus, built from modular arithmetic.
BaseSignature z5_signature() {
  BaseSignature sig;
  sig.kind = BaseKind::Rfol;
  sig.add_sort("Nat", true);
  sig.add_op("0", {}, "Nat", true);
  sig.add_op("2", {}, "Nat", true);
  sig.add_op("3", {}, "Nat", true);
  sig.add_op("suc", {"Nat"}, "Nat", true);
  sig.add_op("plus", {"Nat", "Nat"}, "Nat", false);
  return sig;
}

BaseModel z5_model() {
  BaseModel m;
  for (int i = 0; i < 5; ++i) m.carriers["Nat"].push_back(std::to_string(i));
  m.ops["0"] = {0};
  m.ops["2"] = {2};
  m.ops["3"] = {3};
  for (int i = 0; i < 5; ++i) m.ops["suc"].push_back((i + 1) % 5);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) m.ops["plus"].push_back((a + b) % 5);
  return m;
}

Term c(const std::string& name) { return Term::app(name); }

TEST(BaseSatisfies, PropValuationLookup) {
  BaseSignature sig;
  sig.add_atom("p");
  BaseModel m;
  m.valuation["p"] = true;
  EXPECT_TRUE(base_satisfies(sig, m, BaseSentence::prop("p")));
  m.valuation["p"] = false;
  EXPECT_FALSE(base_satisfies(sig, m, BaseSentence::prop("p")));
}

TEST(BaseSatisfies, Z5Equations) {
  BaseSignature sig = z5_signature();
  BaseModel m = z5_model();
  ASSERT_TRUE(validate(sig).empty());
  ASSERT_TRUE(validate_model(sig, m).empty());

  EXPECT_TRUE(base_satisfies(sig, m, BaseSentence::equation(Term::app("plus", {c("2"), c("3")}), c("0"))));
  EXPECT_FALSE(base_satisfies(sig, m, BaseSentence::equation(Term::app("plus", {c("2"), c("2")}), c("0"))));

  BaseEnv env{{"x", Value{"Nat", 4}}};
  EXPECT_TRUE(base_satisfies(sig, m, BaseSentence::equation(Term::app("suc", {Term::var("x")}), c("0")), env));
  env["x"].element = 3;
  EXPECT_FALSE(base_satisfies(sig, m, BaseSentence::equation(Term::app("suc", {Term::var("x")}), c("0")), env));
}

TEST(BaseSatisfies, EvaluateMatchesModularArithmetic) {
  BaseSignature sig = z5_signature();
  BaseModel m = z5_model();
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      BaseEnv env{{"x", Value{"Nat", x}}, {"y", Value{"Nat", y}}};
      Term t = Term::app("suc", {Term::app("plus", {Term::var("x"), Term::app("suc", {Term::var("y")})})});
      EXPECT_EQ(evaluate(sig, m, t, env), (x + y + 2) % 5);
    }
}

TEST(BaseSatisfies, Errors) {
  BaseSignature sig = z5_signature();
  BaseModel m = z5_model();
  EXPECT_THROW(base_satisfies(sig, m, BaseSentence::equation(Term::var("x"), c("0"))), UnboundVariable);
  EXPECT_THROW(base_satisfies(sig, m, BaseSentence::equation(Term::app("suc", {}), c("0"))), UnsortedTerm);
  EXPECT_THROW(base_satisfies(sig, m, BaseSentence::equation(c("nope"), c("0"))), UnsortedTerm);
  EXPECT_THROW(check_sorted(sig, BaseSentence::prop("p"), {}), UnsortedTerm);
  EXPECT_THROW(sort_of(sig, Term::var("y"), {}), UnboundVariable);
}

TEST(BaseSignatureValidate, RigidSymbolsNeedRigidSorts) {
  BaseSignature sig;
  sig.kind = BaseKind::Rfol;
  sig.add_sort("F", false);
  sig.add_sort("N", true);
  sig.add_op("f", {"N"}, "F", true);
  sig.add_rel("r", {"F"}, true);
  sig.add_op("g", {"Missing"}, "N", false);
  auto problems = validate(sig);
  EXPECT_EQ(problems.size(), 3u);
}

TEST(BaseModelValidate, TablesMustBeTotal) {
  BaseSignature sig = z5_signature();
  BaseModel m = z5_model();
  m.ops["plus"].pop_back();
  EXPECT_FALSE(validate_model(sig, m).empty());
  m = z5_model();
  m.ops["suc"][0] = 7;
  EXPECT_FALSE(validate_model(sig, m).empty());
}

TEST(TranslateSentence, IdentityAndRenamings) {
  BaseSignature p;
  p.add_atom("p");
  BaseSentence s = BaseSentence::prop("p");
  EXPECT_EQ(translate_sentence(SignatureMorphism::identity(p), s), s);

  BaseSignature q;
  q.add_atom("q");
  SignatureMorphism phi;
  phi.source = p;
  phi.target = q;
  phi.atom_map["p"] = "q";
  ASSERT_TRUE(validate(phi).empty());
  EXPECT_EQ(translate_sentence(phi, s), BaseSentence::prop("q"));
  EXPECT_THROW(translate_sentence(phi, BaseSentence::prop("r")), SymbolNotInDomain);
}

TEST(TranslateSentence, OpRenaming) {
  BaseSignature src;
  src.kind = BaseKind::Rfol;
  src.add_sort("Nat", true);
  src.add_op("0", {}, "Nat", true);
  src.add_op("X", {"Nat", "Nat"}, "Nat", false);
  BaseSignature tgt = src;
  tgt.ops.erase("X");
  tgt.add_op("plus", {"Nat", "Nat"}, "Nat", false);
  SignatureMorphism phi;
  phi.source = src;
  phi.target = tgt;
  phi.op_map["X"] = "plus";
  ASSERT_TRUE(validate(phi).empty());

  BaseSentence s = BaseSentence::equation(Term::app("X", {Term::var("m"), c("0")}), Term::var("m"));
  BaseSentence expected = BaseSentence::equation(Term::app("plus", {Term::var("m"), c("0")}), Term::var("m"));
  EXPECT_EQ(translate_sentence(phi, s), expected);
}

TEST(ReductModel, IdentityExtensionAndRenaming) {
  BaseSignature sig = z5_signature();
  BaseModel m = z5_model();
  EXPECT_EQ(reduct_model(SignatureMorphism::identity(sig), m), m);

  BaseSignature ext = sig;
  ext.add_op("cst", {}, "Nat", true);
  BaseModel m2 = m;
  m2.ops["cst"] = {3};
  EXPECT_EQ(reduct_model(SignatureMorphism::inclusion(sig, ext), m2), m);

  BaseSignature p, q;
  p.add_atom("p");
  q.add_atom("q");
  SignatureMorphism phi;
  phi.source = p;
  phi.target = q;
  phi.atom_map["p"] = "q";
  BaseModel mq;
  mq.valuation["q"] = false;
  BaseModel expected;
  expected.valuation["p"] = false;
  EXPECT_EQ(reduct_model(phi, mq), expected);
}

TEST(SignatureMorphismValidate, RejectsRankAndRigidityChanges) {
  BaseSignature src;
  src.kind = BaseKind::Rfol;
  src.add_sort("N", true);
  src.add_op("f", {"N"}, "N", true);
  BaseSignature tgt;
  tgt.kind = BaseKind::Rfol;
  tgt.add_sort("N", true);
  tgt.add_op("f", {"N"}, "N", false);
  EXPECT_FALSE(validate(SignatureMorphism::inclusion(src, tgt)).empty());
  tgt.ops.clear();
  tgt.add_op("f", {"N", "N"}, "N", true);
  EXPECT_FALSE(validate(SignatureMorphism::inclusion(src, tgt)).empty());
}

// Random atomic sentence over a base signature from the generators, using
// variables v0..v2 of the rigid sort N.
Term random_term(Rng& rng, const BaseSignature& sig, const std::string& sort, int depth) {
  std::vector<Term> options;
  if (sort == "N")
    for (int i = 0; i < 3; ++i) options.push_back(Term::var("v" + std::to_string(i)));
  for (const auto& [name, op] : sig.ops) {
    if (op.result != sort || (!op.args.empty() && depth == 0)) continue;
    std::vector<Term> args;
    for (const auto& a : op.args) args.push_back(random_term(rng, sig, a, depth - 1));
    options.push_back(Term::app(name, std::move(args)));
  }
  return options[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(options.size()) - 1))];
}

BaseSentence random_atom(Rng& rng, const BaseSignature& sig) {
  if (sig.kind == BaseKind::Prop) {
    std::vector<std::string> atoms(sig.atoms.begin(), sig.atoms.end());
    return BaseSentence::prop(atoms[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(atoms.size()) - 1))]);
  }
  if (testing::coin(rng)) {
    std::string sort = sig.sorts.count("F") && testing::coin(rng) ? "F" : "N";
    return BaseSentence::equation(random_term(rng, sig, sort, 2), random_term(rng, sig, sort, 2));
  }
  std::vector<const RelDecl*> rels;
  for (const auto& [n, r] : sig.rels) rels.push_back(&r);
  const RelDecl* r = rels[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(rels.size()) - 1))];
  std::vector<Term> args;
  for (const auto& a : r->args) args.push_back(random_term(rng, sig, a, 2));
  return BaseSentence::relation(r->name, std::move(args));
}

BaseEnv random_env(Rng& rng, const BaseModel& m) {
  BaseEnv env;
  int n = static_cast<int>(m.carriers.at("N").size());
  for (int i = 0; i < 3; ++i) env["v" + std::to_string(i)] = Value{"N", testing::uniform(rng, 0, n - 1)};
  return env;
}

TEST(SatisfactionCondition, RandomMorphismsModelsAndSentences) {
  Rng rng(20240611);
  int cases = 0;
  for (int round = 0; round < 300; ++round) {
    bool prop = round % 2 == 0;
    HybridSignature sig = prop ? testing::random_prop_signature(rng) : testing::random_rfol_signature(rng);
    HybridMorphism hphi = testing::random_renaming(rng, sig);
    const SignatureMorphism& phi = hphi.base;
    ASSERT_TRUE(validate(phi).empty());
    auto target = std::make_shared<const HybridSignature>(hphi.target);
    BaseModel m2 = testing::random_model(rng, target, 1, 3).local[0];
    ASSERT_TRUE(validate_model(phi.target, m2).empty());
    BaseModel reduced = reduct_model(phi, m2);
    ASSERT_TRUE(validate_model(phi.source, reduced).empty());

    for (int k = 0; k < 4; ++k) {
      BaseSentence s = random_atom(rng, phi.source);
      BaseEnv env = prop ? BaseEnv{} : random_env(rng, reduced);
      bool lhs = base_satisfies(phi.target, m2, translate_sentence(phi, s), translate_env(phi, env));
      bool rhs = base_satisfies(phi.source, reduced, s, env);
      ASSERT_EQ(lhs, rhs) << "round " << round;
      ++cases;
    }
  }
  EXPECT_GE(cases, 100);
}

TEST(SatisfactionCondition, IdentityAndFunctoriality) {
  Rng rng(77);
  for (int round = 0; round < 120; ++round) {
    HybridSignature sig = round % 2 ? testing::random_prop_signature(rng) : testing::random_rfol_signature(rng);
    SignatureMorphism phi = testing::random_renaming(rng, sig).base;
    HybridSignature mid;
    mid.base = phi.target;
    SignatureMorphism psi = testing::random_renaming(rng, mid).base;
    SignatureMorphism both = compose(phi, psi);
    ASSERT_TRUE(validate(both).empty());

    auto sp = std::make_shared<const HybridSignature>(sig);
    BaseModel m = testing::random_model(rng, sp, 1, 3).local[0];
    EXPECT_EQ(reduct_model(SignatureMorphism::identity(sig.base), m), m);

    BaseSentence s = random_atom(rng, sig.base);
    EXPECT_EQ(translate_sentence(SignatureMorphism::identity(sig.base), s), s);
    EXPECT_EQ(translate_sentence(both, s), translate_sentence(psi, translate_sentence(phi, s)));
  }
}

}  // namespace
}  // namespace hyloc
