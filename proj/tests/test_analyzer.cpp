#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "support.hpp"

namespace gridspec {
namespace {

Analysis analyze_text(const std::string& text) {
  auto parsed = parse_document(text);
  EXPECT_TRUE(parsed.ok()) << text;
  return analyze(parsed.document);
}

std::vector<std::string> error_codes(const Diagnostics& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags)
    if (d.severity == Severity::Error) out.push_back(d.code);
  return out;
}

bool has_code(const Diagnostics& diags, const std::string& code) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::string fixture(const char* name) { return testing::read_text(testing::fixture_dir(name) / "model.gsx"); }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) text.replace(at, from.size(), to);
  return text;
}

TEST(Resolve, CashFlowFixture) {
  auto parsed = parse_document(fixture("cash_flow"));
  Diagnostics diags;
  const SymbolTable s = resolve(parsed.document, diags);
  EXPECT_TRUE(diags.empty());
  EXPECT_EQ(s.tables.size(), 5u);
  EXPECT_EQ(s.bounds.size(), 1u);
  EXPECT_EQ(s.equations.size(), 4u);
  EXPECT_EQ(classify(s, "initial_cash"), TableClass::Input);
  EXPECT_EQ(classify(s, "total_cash_at_end_of_period"), TableClass::Derived);
}

TEST(Resolve, DuplicateBounds) {
  auto a = analyze_text("bounds time_span: 1 to 12.\nbounds time_span: 1 to 3.");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"DuplicateName"});
  EXPECT_EQ(a.diagnostics[0].pos.line, 2);
}

TEST(Resolve, UnknownTable) {
  auto a = analyze_text("bounds t: 1 to 2.\nfoo[t] = 1.");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"UnknownTable"});
}

TEST(Resolve, UnknownBoundsDoesNotCascade) {
  auto a = analyze_text("table x : nowhere -> number.\nx[t] = 1.");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"UnknownBounds"});
}

TEST(Resolve, ArityMismatch) {
  auto a = analyze_text("bounds b: 1 to 2.\ntable x : b -> number.\nx[1, 2] = 1.");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"ArityMismatch"});
  a = analyze_text("bounds b: 1 to 2.\ntable x : b -> number.\ntable y : b -> number.\ny[t] = x[].");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"ArityMismatch"});
}

TEST(Resolve, InvalidBoundsAndArity) {
  EXPECT_TRUE(has_code(analyze_text("bounds b: 3 to 1.").diagnostics, "InvalidBounds"));
  EXPECT_TRUE(has_code(analyze_text("bounds b: 1 to 2.\ntable x : b b b b -> number.").diagnostics, "ArityTooLarge"));
}

TEST(Typecheck, CanSupplyWantsIsBoolean) {
  auto a = analyze_text(fixture("loans"));
  EXPECT_TRUE(a.ok());
  EXPECT_FALSE(has_code(a.diagnostics, "TypeMismatch"));
}

TEST(Typecheck, BooleanIntoCurrency) {
  const std::string text = fixture("loans") + "\ntotal_cash_at_end_of_period[t] = has_ceiling[1].\n";
  auto a = analyze_text(text);
  EXPECT_TRUE(has_code(a.diagnostics, "TypeMismatch"));
}

TEST(Typecheck, MisplacedAll) {
  auto a = analyze_text(
      "bounds b: 1 to 3.\ntable y : b -> number.\ntable x : b -> number.\nx[t] = sum( y[ all ] ) + all.");
  EXPECT_TRUE(has_code(a.diagnostics, "MisplacedAll"));
  a = analyze_text("bounds b: 1 to 3.\ntable y : b -> number.\ntable x : b -> number.\nx[t] = y[all].");
  EXPECT_TRUE(has_code(a.diagnostics, "MisplacedAll"));
}

TEST(Typecheck, OtherErrors) {
  const std::string head = "bounds b: 1 to 3.\ntable y : b -> number.\ntable f : b -> boolean.\n";
  EXPECT_TRUE(has_code(analyze_text(head + "table x : b -> number.\nx[t] = y[s].").diagnostics, "UnboundIndexVariable"));
  EXPECT_TRUE(has_code(analyze_text(head + "table x : b -> number.\nx[t] = if(y[t], 1, 2).").diagnostics, "BooleanExpected"));
  EXPECT_TRUE(has_code(analyze_text(head + "table x : b -> boolean.\nx[t] = or(f[t], y[t]).").diagnostics, "BooleanExpected"));
  EXPECT_TRUE(has_code(analyze_text(head + "table x : b -> number.\nx[t] = frob(y[t]).").diagnostics, "UnknownFunction"));
  EXPECT_TRUE(has_code(analyze_text(head + "table x : -> general.\nx[] = match(true, f[all], 1).").diagnostics,
                       "UnsupportedMatchType"));
  EXPECT_TRUE(has_code(analyze_text(head + "table x : b -> number.\nx[t] = not(f[t], f[t]).").diagnostics, "BadArgumentCount"));
}

TEST(Typecheck, NumericFamilyIsCompatible) {
  auto a = analyze_text(
      "bounds b: 1 to 3.\ntable g : b -> general.\ntable n : b -> number.\ntable c : b -> currency.\n"
      "g[t] = c[t] * 2.\nn[t] = g[t] + c[t].\nc[t] = n[t] / 4.");
  EXPECT_FALSE(has_code(a.diagnostics, "TypeMismatch"));
}

TEST(Elaborate, CashFlowRules) {
  auto a = analyze_text(fixture("cash_flow"));
  ASSERT_TRUE(a.ok());
  const auto& rules = a.plan.rules;
  const auto& first = rules.at(CellId{"total_cash_at_start_of_period", {1}});
  EXPECT_TRUE(std::holds_alternative<ConstantPattern>(a.plan.equation_of(first).lhs_patterns[0]));
  EXPECT_TRUE(first.substitution.empty());
  for (long t = 2; t <= 12; ++t) {
    const auto& r = rules.at(CellId{"total_cash_at_start_of_period", {t}});
    EXPECT_TRUE(std::holds_alternative<GuardedVarPattern>(a.plan.equation_of(r).lhs_patterns[0]));
    EXPECT_EQ(r.substitution.at("t"), t);
  }
}

TEST(Elaborate, UncoveredCell) {
  const std::string text =
      replace_once(fixture("cash_flow"), "total_cash_at_start_of_period[ 1 ] =\n  initial_cash[ ].", "");
  auto a = analyze_text(text);
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"UncoveredCell"});
  EXPECT_NE(a.diagnostics[0].message.find("total_cash_at_start_of_period[1]"), std::string::npos);
}

TEST(Elaborate, OverlappingRules) {
  const std::string text =
      fixture("cash_flow") + "\ntotal_cash_at_start_of_period[ t ] = total_cash_at_end_of_period[ t-1 ].\n";
  auto a = analyze_text(text);
  // Brute force: for t in 1..12 count the rules [1], [t>1], [t] that match.
  std::vector<std::string> expected;
  for (long t = 1; t <= 12; ++t) {
    const int matches = (t == 1) + (t > 1) + 1;
    if (matches > 1) expected.push_back("total_cash_at_start_of_period[" + std::to_string(t) + "]");
  }
  std::vector<std::string> got;
  for (const auto& d : a.diagnostics)
    if (d.code == "OverlappingRules") got.push_back(d.message.substr(0, d.message.find(' ')));
  EXPECT_EQ(got, expected);
}

TEST(Elaborate, SameConstantCellTwiceOverlaps) {
  auto a = analyze_text("table x : -> number.\nx[] = 1.\nx[] = 2.");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"OverlappingRules"});
}

TEST(Elaborate, IndexOutOfBounds) {
  auto a = analyze_text("bounds b: 1 to 3.\ntable x : b -> number.\nx[t] = x[t-1].");
  EXPECT_EQ(error_codes(a.diagnostics), std::vector<std::string>{"IndexOutOfBounds"});
}

TEST(Elaborate, NoMixedTables) {
  auto a = analyze_text("bounds b: 1 to 3.\ntable x : b -> number.\nx[1] = 1.");
  EXPECT_EQ(error_codes(a.diagnostics), (std::vector<std::string>{"UncoveredCell", "UncoveredCell"}));
}

TEST(ElaborateProperty, PartitionAndSubstitutionSoundness) {
  for (const char* name : {"cash_flow", "borrowing", "loans"}) {
    auto a = analyze_text(fixture(name));
    ASSERT_TRUE(a.ok()) << name;
    std::size_t total = 0;
    for (const auto& t : a.plan.symbols.table_order) {
      for (const auto& cell : enumerate_cells(a.plan.symbols, t)) {
        ++total;
        const bool derived = a.plan.rules.count(cell) > 0;
        const bool input = a.plan.inputs.count(cell) > 0;
        EXPECT_NE(derived, input) << to_string(cell);
        if (!derived) continue;
        const auto& r = a.plan.rules.at(cell);
        const auto& patterns = a.plan.equation_of(r).lhs_patterns;
        for (std::size_t k = 0; k < patterns.size(); ++k) {
          const long v = cell.indices[k];
          std::visit(
              [&](const auto& p) {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, ConstantPattern>) {
                  EXPECT_EQ(p.value, v);
                } else if constexpr (std::is_same_v<P, VarPattern>) {
                  EXPECT_EQ(r.substitution.at(p.name), v);
                } else {
                  EXPECT_EQ(r.substitution.at(p.name), v);
                  EXPECT_TRUE(compare_index(v, p.comparator, p.bound));
                }
              },
              patterns[k]);
        }
      }
    }
    EXPECT_EQ(total, a.plan.rules.size() + a.plan.inputs.size());
  }
}

TEST(ElaborateProperty, MatchesNaiveScan) {
  testing::DocGenerator gen(12345);
  for (int i = 0; i < 500; ++i) {
    auto problem = testing::elaboration_disagreement(gen.small_doc());
    EXPECT_FALSE(problem.has_value()) << *problem;
    if (problem) break;
  }
}

TEST(ElaborateProperty, IndependentOfEquationOrder) {
  testing::DocGenerator gen(555);
  for (int i = 0; i < 200; ++i) {
    auto d = gen.small_doc();
    auto a = analyze_text(testing::render(testing::element_texts(d)));
    if (!a.ok()) continue;
    for (auto& t : d.tables) std::reverse(t.rules.begin(), t.rules.end());
    auto b = analyze_text(testing::render(testing::element_texts(d)));
    ASSERT_TRUE(b.ok());
    ASSERT_EQ(a.plan.rules.size(), b.plan.rules.size());
    for (const auto& [cell, r] : a.plan.rules) {
      const auto& other = b.plan.rules.at(cell);
      EXPECT_EQ(r.substitution, other.substitution);
      EXPECT_TRUE(structurally_equal(*a.plan.equation_of(r).rhs, *b.plan.equation_of(other).rhs));
    }
  }
}

TEST(ElaborateProperty, Deterministic) {
  const std::string text = fixture("loans");
  auto a = analyze_text(text);
  auto b = analyze_text(text);
  ASSERT_EQ(a.plan.rules.size(), b.plan.rules.size());
  for (const auto& [cell, r] : a.plan.rules) {
    EXPECT_EQ(r.equation, b.plan.rules.at(cell).equation);
    EXPECT_EQ(r.substitution, b.plan.rules.at(cell).substitution);
  }
  EXPECT_EQ(a.plan.inputs, b.plan.inputs);
}

}  // namespace
}  // namespace gridspec
