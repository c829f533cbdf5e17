#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "hyloc/error.hpp"
#include "hyloc/hybrid.hpp"
#include "hyloc/kripke.hpp"
#include "oracle.hpp"

namespace hyloc {
namespace {

using testing::Rng;

Sentence nom(const std::string& n) { return Sentence::nominal(n); }
Sentence prop(const std::string& p) { return Sentence::base(BaseSentence::prop(p)); }

TEST(CheckWellformed, CalcRetrievalIsFine) {
  const HybridSignature& sig = testing::calc_theory().signature;
  Sentence s = Sentence::at("sum", Sentence::diamond("shift", {nom("mult")}));
  EXPECT_TRUE(check_wellformed(sig, s).empty());
}

TEST(CheckWellformed, ArityMismatch) {
  const HybridSignature& sig = testing::calc_theory().signature;
  auto d = check_wellformed(sig, Sentence::box("shift", {nom("sum"), nom("mult")}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].path, "root");
  EXPECT_NE(d[0].message.find("arity mismatch: expected 1 argument"), std::string::npos) << d[0].message;
}

TEST(CheckWellformed, RigidQuantifierOverFlexibleSort) {
  HybridSignature sig;
  sig.base.kind = BaseKind::Rfol;
  sig.base.add_sort("Flex", false);
  sig.base.add_op("a", {}, "Flex", false);
  Sentence body = Sentence::base(BaseSentence::equation(Term::var("x"), Term::app("a")));
  auto d = check_wellformed(sig, Sentence::forall_rigid("x", "Flex", body));
  EXPECT_FALSE(d.empty());
}

TEST(CheckWellformed, UndeclaredNamesAndShadowing) {
  HybridSignature sig;
  sig.base.add_atom("p");
  sig.nominals.insert("i");
  sig.modalities["l"] = 2;
  EXPECT_FALSE(check_wellformed(sig, Sentence::at("j", prop("p"))).empty());
  EXPECT_FALSE(check_wellformed(sig, prop("q")).empty());
  EXPECT_FALSE(check_wellformed(sig, Sentence::diamond("m", {prop("p")})).empty());

  Sentence shadow = Sentence::forall_nominal("k", Sentence::exists_nominal("k", nom("k")));
  auto d = check_wellformed(sig, shadow);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d[0].path, "root.0");

  // A binder may not reuse a declared symbol either.
  EXPECT_FALSE(check_wellformed(sig, Sentence::forall_nominal("i", nom("i"))).empty());
  EXPECT_TRUE(check_wellformed(sig, Sentence::forall_nominal("k", Sentence::at("k", prop("p")))).empty());
}

TEST(HybridSignatureValidate, DisjointNamespacesAndArity) {
  HybridSignature sig;
  sig.base.add_atom("p");
  sig.nominals.insert("p");
  sig.modalities["l"] = 1;
  EXPECT_EQ(validate(sig).size(), 2u);
}

TEST(FreeNames, Examples) {
  EXPECT_EQ(free_names(nom("i")), (FreeNames{{"i"}, {}}));
  EXPECT_EQ(free_names(Sentence::forall_nominal("i", nom("i"))), FreeNames{});
  const auto& axioms = testing::calc_theory().axioms;
  for (const auto& a : axioms) {
    FreeNames f = free_names(a);
    EXPECT_TRUE(f.variables.empty());
  }
  EXPECT_EQ(free_names(axioms.back()), (FreeNames{{"mult"}, {}}));
  Sentence open = Sentence::forall_rigid(
      "m", "Nat", Sentence::base(BaseSentence::equation(Term::var("m"), Term::var("n"))));
  EXPECT_EQ(free_names(open), (FreeNames{{}, {"n"}}));
}

TEST(TranslateHybrid, IdentityAndNominalRenaming) {
  const HybridSignature& sig = testing::calc_theory().signature;
  for (const auto& a : testing::calc_theory().axioms)
    EXPECT_EQ(translate_hybrid(HybridMorphism::identity(sig), a), a);

  HybridMorphism phi = HybridMorphism::identity(sig);
  phi.target.nominals = {"s0", "mult"};
  phi.nominal_map["sum"] = "s0";
  ASSERT_TRUE(validate(phi).empty());
  Sentence rho = Sentence::diamond("shift", {nom("mult")});
  EXPECT_EQ(translate_hybrid(phi, Sentence::at("sum", rho)), Sentence::at("s0", rho));
}

TEST(TranslateHybrid, BinderIsRenamedOnCapture) {
  HybridSignature src;
  src.base.add_atom("p");
  src.nominals.insert("i");
  src.modalities["l"] = 2;
  HybridSignature tgt = src;
  tgt.nominals.insert("k");
  HybridMorphism phi = HybridMorphism::inclusion(src, tgt);
  phi.nominal_map["i"] = "k";
  tgt.nominals.erase("i");
  phi.target = tgt;
  ASSERT_TRUE(validate(phi).empty());

  // forall k . (k /\ @ i p): the free i becomes k and would be captured.
  Sentence s = Sentence::forall_nominal("k", Sentence::conjunction(nom("k"), Sentence::at("i", prop("p"))));
  Sentence t = translate_hybrid(phi, s);
  ASSERT_EQ(t.kind(), Connective::ForallNom);
  EXPECT_NE(t.name(), "k");
  EXPECT_FALSE(tgt.has_nominal(t.name()));
  EXPECT_EQ(t.arg(0).arg(0), nom(t.name()));
  EXPECT_EQ(t.arg(0).arg(1), Sentence::at("k", prop("p")));
  EXPECT_EQ(free_names(t), (FreeNames{{"k"}, {}}));
  EXPECT_TRUE(check_wellformed(tgt, t).empty());
}

TEST(TranslateHybrid, SymbolOutsideSource) {
  HybridSignature sig;
  sig.base.add_atom("p");
  EXPECT_THROW(translate_hybrid(HybridMorphism::identity(sig), nom("ghost")), SymbolNotInDomain);
}

TEST(TranslateHybrid, PreservesShapeAndFreeNames) {
  Rng rng(4242);
  for (int round = 0; round < 200; ++round) {
    HybridSignature sig = round % 2 ? testing::random_prop_signature(rng) : testing::random_rfol_signature(rng);
    HybridMorphism phi = testing::random_renaming(rng, sig);
    ASSERT_TRUE(validate(phi).empty());
    Sentence s = testing::random_sentence(rng, sig);
    ASSERT_TRUE(check_wellformed(sig, s).empty());
    Sentence t = translate_hybrid(phi, s);
    EXPECT_TRUE(check_wellformed(phi.target, t).empty()) << "round " << round;
    EXPECT_EQ(t.size(), s.size());
    FreeNames fs = free_names(s), ft = free_names(t);
    std::set<std::string> mapped;
    for (const auto& n : fs.nominals) mapped.insert(phi.map_nominal(n));
    EXPECT_EQ(ft.nominals, mapped);
  }
}

// Open sentences are closed by wrapping their free nominals; generated
// sentences are already closed over the signature.
TEST(HybridSatisfactionCondition, RandomRenamingsModelsSentences) {
  Rng rng(9001);
  int cases = 0;
  for (int round = 0; round < 150; ++round) {
    HybridSignature sig = round % 3 == 0 ? testing::random_rfol_signature(rng) : testing::random_prop_signature(rng);
    HybridMorphism phi = testing::random_renaming(rng, sig);
    auto target = std::make_shared<const HybridSignature>(phi.target);
    KripkeModel k2 = testing::random_model(rng, target, 3, 2);
    ASSERT_TRUE(check_structure(k2).empty());
    KripkeModel k = reduct(phi, k2);
    ASSERT_TRUE(check_structure(k).empty());
    ASSERT_EQ(*k.signature, sig);

    for (int j = 0; j < 3; ++j) {
      Sentence rho = testing::random_sentence(rng, sig);
      Sentence translated = translate_hybrid(phi, rho);
      for (int w = 0; w < k2.world_count(); ++w) {
        bool lhs = sat_local(k2, w, translated);
        bool rhs = sat_local(k, w, rho);
        ASSERT_EQ(lhs, rhs) << "round " << round << " world " << w;
        ASSERT_EQ(rhs, testing::oracle_sat(k, w, rho));
      }
      EXPECT_EQ(sat_global(k2, translated), sat_global(k, rho));
      ++cases;
    }
  }
  EXPECT_GE(cases, 100);
}

}  // namespace
}  // namespace hyloc
