#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "hyloc/syntax.hpp"

namespace hyloc {
namespace {

using testing::Rng;

Sentence nom(const std::string& n) { return Sentence::nominal(n); }
Sentence prop(const std::string& p) { return Sentence::base(BaseSentence::prop(p)); }

bool mentions(const std::vector<Diagnostic>& ds, const std::string& text) {
  for (const auto& d : ds)
    if (d.message.find(text) != std::string::npos) return true;
  return false;
}

std::string all_messages(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) out += d.to_string() + "\n";
  return out;
}

// Every diagnostic must point at a real position of `text`.
void expect_positions_inside(const std::string& text, const std::vector<Diagnostic>& ds) {
  std::vector<std::size_t> lengths{0};
  for (char c : text) {
    if (c == '\n')
      lengths.push_back(0);
    else
      ++lengths.back();
  }
  for (const auto& d : ds) {
    ASSERT_GE(d.line, 1);
    ASSERT_LE(static_cast<std::size_t>(d.line), lengths.size()) << d.to_string();
    EXPECT_GE(d.column, 1);
    EXPECT_LE(static_cast<std::size_t>(d.column), lengths[static_cast<std::size_t>(d.line - 1)] + 1) << d.to_string();
  }
}

HybridSignature small_signature() {
  HybridSignature sig;
  sig.base.add_atom("p");
  sig.base.add_atom("q");
  sig.base.add_atom("r");
  sig.nominals = {"i", "j"};
  sig.modalities["l"] = 2;
  sig.modalities["t"] = 3;
  return sig;
}

Sentence goal(const std::string& text) {
  SentenceParseResult r = parse_sentence(text, small_signature());
  EXPECT_TRUE(r.sentence) << all_messages(r.diagnostics);
  return r.sentence ? *r.sentence : prop("p");
}

TEST(ParseSpec, CalcListing) {
  const SpecParseResult& r = testing::calc_spec();
  ASSERT_TRUE(r.ok()) << all_messages(r.diagnostics);
  ASSERT_EQ(r.file.blocks.size(), 2u);
  EXPECT_EQ(r.file.blocks[0].name, "Nat");
  EXPECT_FALSE(r.file.blocks[0].hybrid);
  EXPECT_EQ(r.file.blocks[1].name, "Calc");
  EXPECT_EQ(r.file.blocks[1].logic, "HRigidCASLC");
  EXPECT_EQ(r.file.axiom_count(), 7u);
  ASSERT_EQ(r.theories.size(), 1u);
  const HybridTheory& th = testing::calc_theory();
  EXPECT_EQ(th.signature.nominals, (std::set<std::string>{"mult", "sum"}));
  EXPECT_EQ(th.signature.modalities, (std::map<std::string, int>{{"shift", 2}}));
  EXPECT_TRUE(th.signature.base.find_sort("Nat")->rigid);
  EXPECT_FALSE(th.signature.base.find_op("X")->rigid);
  EXPECT_EQ(th.axioms.size(), 7u);
  EXPECT_EQ(th.axioms[0], Sentence::disjunction(nom("mult"), nom("sum")));
  EXPECT_EQ(th.axioms[1], Sentence::at("sum", Sentence::conjunction(Sentence::diamond("shift", {nom("mult")}),
                                                                     Sentence::box("shift", {nom("mult")}))));
  EXPECT_EQ(th.axioms[3], Sentence::at("mult", Sentence::negation(nom("sum"))));
}

TEST(ParseSpec, EmptyInput) {
  SpecParseResult r = parse_spec("");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.file.blocks.empty());
  EXPECT_TRUE(r.theories.empty());
  EXPECT_EQ(print_spec(r.file), "");
  EXPECT_TRUE(parse_spec("  -- only a comment\n\n").file.blocks.empty());
}

TEST(ParseSpec, UnaryModalityIsRejected) {
  std::string text =
      "spec S =\n"
      "  hlogic : HPROP\n"
      "  nominals mult\n"
      "  modality shift : 1\n"
      "  . <shift> mult\n"
      "end\n";
  SpecParseResult r = parse_spec(text);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.diagnostics, "arity")) << all_messages(r.diagnostics);
  expect_positions_inside(text, r.diagnostics);
  EXPECT_EQ(r.diagnostics[0].line, 4);
}

TEST(ParseSpec, PositionedDiagnostics) {
  std::string text =
      "spec S =\n"
      "  hlogic : HPROP\n"
      "  props p\n"
      "  nominals i\n"
      "  . @ i : p /\\ q\n"
      "  . p => \n"
      "  . p # p\n"
      "end\n";
  ParseOptions opts;
  opts.file_name = "bad.hspec";
  SpecParseResult r = parse_spec(text, opts);
  ASSERT_GE(r.diagnostics.size(), 3u) << all_messages(r.diagnostics);
  expect_positions_inside(text, r.diagnostics);
  EXPECT_EQ(r.diagnostics[0].line, 5);
  EXPECT_EQ(r.diagnostics[0].column, 16);
  EXPECT_EQ(r.diagnostics[0].file, "bad.hspec");
  EXPECT_EQ(r.diagnostics[0].excerpt, "  . @ i : p /\\ q");
  EXPECT_EQ(r.diagnostics[0].to_string().rfind("bad.hspec:5:16: error: ", 0), 0u) << r.diagnostics[0].to_string();
  EXPECT_TRUE(mentions(r.diagnostics, "unexpected character"));

  opts.first_error_only = true;
  SpecParseResult first = parse_spec(text, opts);
  ASSERT_EQ(first.diagnostics.size(), 1u);
  EXPECT_EQ(first.diagnostics[0].line, 5);
}

TEST(ParseSpec, DeclarationErrors) {
  auto diags = [](const std::string& t) { return parse_spec(t).diagnostics; };
  EXPECT_TRUE(mentions(diags("spec A =\n logic : RigidFOL\n rigid op c : F\n sort F\nend\n"), "F"));
  EXPECT_FALSE(diags("spec A =\n logic : RigidFOL\n sort F\n rigid op c : F\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n data Missing\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n logic : PROP\n props p\n . p\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n props p, p\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n props p\n nominals p\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n props \xc3\xa9t\xc3\xa9\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n props p\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n modality l : 3 with reflexive\nend\n").empty());
  EXPECT_FALSE(diags("spec A =\n hlogic : HPROP\n props p\n . forall k : World . forall k : World . k\nend\n").empty());
}

TEST(ParseSpec, DataImportsAndClashes) {
  std::string ok =
      "spec A =\n logic : PROP\n props p\nend\n"
      "spec B =\n logic : PROP\n props q\nend\n"
      "spec C =\n hlogic : HPROP\n data A\n data B\n nominals i\n . @ i p \\/ q\nend\n";
  SpecParseResult r = parse_spec(ok);
  ASSERT_TRUE(r.ok()) << all_messages(r.diagnostics);
  EXPECT_EQ(r.theory("C")->signature.base.atoms, (std::set<std::string>{"p", "q"}));

  std::string clash =
      "spec A =\n logic : PROP\n props p\nend\n"
      "spec B =\n logic : PROP\n props p\nend\n"
      "spec C =\n hlogic : HPROP\n data A\n data B\nend\n";
  EXPECT_FALSE(parse_spec(clash).ok());
}

TEST(ParseSentence, PrecedenceAndScope) {
  EXPECT_EQ(goal("p \\/ q /\\ r"), Sentence::disjunction(prop("p"), Sentence::conjunction(prop("q"), prop("r"))));
  EXPECT_EQ(goal("p => q => r"), Sentence::implication(prop("p"), Sentence::implication(prop("q"), prop("r"))));
  EXPECT_EQ(goal("not p /\\ q"), Sentence::conjunction(Sentence::negation(prop("p")), prop("q")));
  EXPECT_EQ(goal("@ i p => p"), Sentence::implication(Sentence::at("i", prop("p")), prop("p")));
  EXPECT_EQ(goal("@ i : p => p"), Sentence::at("i", Sentence::implication(prop("p"), prop("p"))));
  EXPECT_EQ(goal("<l> p => p"), Sentence::implication(Sentence::diamond("l", {prop("p")}), prop("p")));
  EXPECT_EQ(goal("[t](p, q)"), Sentence::box("t", {prop("p"), prop("q")}));
  EXPECT_EQ(goal("p <=> q"), Sentence::equivalence(prop("p"), prop("q")));
  EXPECT_EQ(goal("forallH k : World . @ k : p \\/ k"),
            Sentence::forall_nominal("k", Sentence::at("k", Sentence::disjunction(prop("p"), nom("k")))));
  EXPECT_EQ(goal("existsH a, b : World . a /\\ b"),
            Sentence::exists_nominal("a", Sentence::exists_nominal("b", Sentence::conjunction(nom("a"), nom("b")))));
}

TEST(ParseSentence, Errors) {
  HybridSignature sig = small_signature();
  EXPECT_FALSE(parse_sentence("<l>(p, q)", sig).sentence);
  EXPECT_FALSE(parse_sentence("@ k p", sig).sentence);
  EXPECT_FALSE(parse_sentence("p q", sig).sentence);
  EXPECT_FALSE(parse_sentence("", sig).sentence);
  auto r = parse_sentence("p /\\ (q", sig);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].line, 1);
}

TEST(RoundTrip, CalcListing) {
  const SpecParseResult& r = testing::calc_spec();
  std::string printed = print_spec(r.file);
  SpecParseResult again = parse_spec(printed);
  ASSERT_TRUE(again.ok()) << all_messages(again.diagnostics) << printed;
  EXPECT_EQ(again.file, r.file);
  EXPECT_EQ(print_spec(again.file), printed);
  ASSERT_EQ(again.theories.size(), 1u);
  EXPECT_EQ(again.theories[0].axioms, r.theories[0].axioms);
}

TEST(RoundTrip, GeneratedSpecs) {
  Rng rng(60221);
  int checked = 0;
  for (int round = 0; round < 600; ++round) {
    SpecFile file = testing::random_spec_file(rng);
    std::string text = print_spec(file);
    SpecParseResult r = parse_spec(text);
    ASSERT_TRUE(r.ok()) << "round " << round << "\n" << all_messages(r.diagnostics) << text;
    ASSERT_EQ(r.file, file) << "round " << round << "\n" << text;
    EXPECT_EQ(print_spec(r.file), text);
    ++checked;
  }
  EXPECT_GE(checked, 500);
}

TEST(RoundTrip, GeneratedSentences) {
  Rng rng(141421);
  for (int round = 0; round < 400; ++round) {
    HybridSignature sig = round % 2 ? testing::random_prop_signature(rng) : testing::random_rfol_signature(rng);
    Sentence s = testing::random_sentence(rng, sig);
    std::string text = print_sentence(s);
    SentenceParseResult r = parse_sentence(text, sig);
    ASSERT_TRUE(r.sentence) << text << "\n" << all_messages(r.diagnostics);
    EXPECT_EQ(*r.sentence, s) << text;
  }
}

TEST(ParseModel, CalcZ5) {
  KripkeModel k = testing::calc_model("calc_z5.hmodel");
  EXPECT_EQ(k.worlds, (std::vector<std::string>{"s", "m"}));
  EXPECT_EQ(k.relation("shift"), (std::set<WorldTuple>{{0, 1}, {1, 0}}));
  EXPECT_EQ(k.nominal_at.at("sum"), 0);
  EXPECT_TRUE(check_constraints(k, {}).empty());
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      EXPECT_EQ(k.local[0].ops.at("X")[static_cast<std::size_t>(a * 5 + b)], (a + b) % 5);
      EXPECT_EQ(k.local[1].ops.at("X")[static_cast<std::size_t>(a * 5 + b)], (a * b) % 5);
    }
}

ModelParseResult calc_text(const std::string& text) {
  auto sig = std::make_shared<const HybridSignature>(testing::calc_theory().signature);
  return parse_model(text, sig);
}

std::string z5_without(const std::string& line_prefix) {
  std::string text = testing::read_file(testing::data_path("calc_z5.hmodel"));
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t e = text.find('\n', pos);
    if (e == std::string::npos) e = text.size();
    std::string line = text.substr(pos, e - pos);
    if (line.rfind(line_prefix, 0) != 0) out += line + "\n";
    pos = e + 1;
  }
  return out;
}

TEST(ParseModel, Diagnostics) {
  ModelParseResult r = calc_text(z5_without("nominal sum"));
  EXPECT_FALSE(r.model);
  EXPECT_TRUE(mentions(r.diagnostics, "nominal 'sum' unassigned")) << all_messages(r.diagnostics);

  std::string text = z5_without("relation") + "relation shift : (s)\n";
  r = calc_text(text);
  EXPECT_TRUE(mentions(r.diagnostics, "width")) << all_messages(r.diagnostics);
  expect_positions_inside(text, r.diagnostics);

  r = calc_text(z5_without("relation") + "relation shift : (s, q)\n");
  EXPECT_TRUE(mentions(r.diagnostics, "unknown world 'q'"));

  r = calc_text(z5_without("zzz") + "in s op suc : (0) -> 1\n");
  EXPECT_TRUE(mentions(r.diagnostics, "redeclared per world")) << all_messages(r.diagnostics);

  r = calc_text(z5_without("in s op X"));
  EXPECT_FALSE(r.diagnostics.empty());
}

bool same_model(const KripkeModel& a, const KripkeModel& b) {
  return a.worlds == b.worlds && a.relations == b.relations && a.nominal_at == b.nominal_at && a.local == b.local;
}

TEST(ModelRoundTrip, GeneratedModels) {
  Rng rng(1618);
  for (int round = 0; round < 200; ++round) {
    auto sig = std::make_shared<const HybridSignature>(round % 2 ? testing::random_prop_signature(rng)
                                                                 : testing::random_rfol_signature(rng));
    KripkeModel k = testing::random_model(rng, sig, 3, 3);
    std::string text = print_model(k);
    ModelParseResult r = parse_model(text, sig);
    ASSERT_TRUE(r.ok()) << all_messages(r.diagnostics) << text;
    EXPECT_TRUE(same_model(*r.model, k)) << text;
    EXPECT_EQ(print_model(*r.model), text);
  }
}

}  // namespace
}  // namespace hyloc
