#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace gridspec::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(Command cmd, const std::string& fixture, bool with_inputs = true) {
  RunConfig c;
  c.command = cmd;
  c.spec_path = (testing::fixture_dir(fixture) / "model.gsx").string();
  if (with_inputs) c.inputs_path = (testing::fixture_dir(fixture) / "inputs.csv").string();
  return c;
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = testing::read_text(e.path());
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::scratch_dir("cli"); }
  void TearDown() override {
    fs::permissions(dir_, fs::perms::owner_all, fs::perm_options::add);
    fs::remove_all(dir_);
  }
  fs::path dir_;
};

TEST(Inputs, ParsesRecords) {
  auto a = analyze(parse_document(testing::read_text(testing::fixture_dir("loans") / "model.gsx")).document);
  auto r = parse_inputs("initial_cash,100\nwant_to_borrow_during_period,5,20\nhas_ceiling,1,true\n\n", a.plan);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.bindings.at(CellId{"initial_cash", {}}), Value::number(100));
  EXPECT_EQ(r.bindings.at(CellId{"want_to_borrow_during_period", {5}}), Value::number(20));
  EXPECT_EQ(r.bindings.at(CellId{"has_ceiling", {1}}), Value::boolean(true));
}

TEST(Inputs, Errors) {
  auto a = analyze(parse_document(testing::read_text(testing::fixture_dir("loans") / "model.gsx")).document);
  auto code_of = [&](const std::string& csv) {
    auto r = parse_inputs(csv, a.plan);
    return r.diagnostics.empty() ? std::string() : r.diagnostics[0].code;
  };
  EXPECT_EQ(code_of("nope,1\n"), "UnknownTable");
  EXPECT_EQ(code_of("initial_cash,1,2\n"), "BadArity");
  EXPECT_EQ(code_of("initial_cash,lots\n"), "BadValue");
  EXPECT_EQ(code_of("has_ceiling,1,7\n"), "BadValue");
  EXPECT_EQ(code_of("initial_cash,1\ninitial_cash,2\n"), "DuplicateBinding");
  EXPECT_EQ(code_of("total_cash_at_end_of_period,1,5\n"), "BindingToDerivedTable");
  EXPECT_EQ(code_of("ceiling,9,5\n"), "IndexOutOfBounds");
  auto r = parse_inputs("initial_cash,1\n\nnope,1\n", a.plan);
  EXPECT_EQ(r.diagnostics.at(0).pos.line, 3);
}

TEST_F(Cli, CheckExitCodes) {
  EXPECT_EQ(run_cli(config(Command::Check, "loans")).code, kOk);

  const fs::path spec = dir_ / "uncovered.gsx";
  testing::write_text(spec, "bounds b: 1 to 2.\ntable x : b -> number.\nx[1] = 1.\n");
  RunConfig c;
  c.spec_path = spec.string();
  auto o = run_cli(c);
  EXPECT_EQ(o.code, kSpecError);
  EXPECT_EQ(o.err, "error UncoveredCell 2:1 no equation defines x[2]\n");

  c.spec_path = (dir_ / "missing.gsx").string();
  EXPECT_EQ(run_cli(c).code, kIoError);
}

TEST_F(Cli, EvalWritesValues) {
  RunConfig c = config(Command::Eval, "cash_flow");
  c.out_path = (dir_ / "values.csv").string();
  ASSERT_EQ(run_cli(c).code, kOk);
  const SheetGrid g = parse_csv(testing::read_text(*c.out_path));
  for (int t = 1; t <= 12; ++t) EXPECT_EQ(g.get(t + 2, 5), render_value(Value::currency(100 - 5.0 * t)));

  c = config(Command::Eval, "loans");
  auto o = run_cli(c);
  ASSERT_EQ(o.code, kOk);
  const SheetGrid h = parse_csv(o.out);
  std::vector<std::string> column;
  for (int r = 3; r <= 14; ++r) column.push_back(h.get(r, 8));
  EXPECT_EQ(column, (std::vector<std::string>{"1", "2", "3", "4", "#N/A", "2", "3", "4", "#N/A", "#N/A", "1", "1"}));
}

TEST_F(Cli, EvalCycle) {
  const fs::path spec = dir_ / "cycle.gsx";
  testing::write_text(spec, "bounds b: 1 to 1.\ntable a : b -> number.\ntable c : b -> number.\na[t] = c[t].\nc[t] = a[t].\n");
  RunConfig c;
  c.command = Command::Eval;
  c.spec_path = spec.string();
  auto o = run_cli(c);
  EXPECT_EQ(o.code, kRuntimeError);
  EXPECT_NE(o.err.find("a[1] -> c[1] -> a[1]"), std::string::npos);
}

TEST_F(Cli, EvalRuntimeFault) {
  const fs::path spec = dir_ / "fault.gsx";
  testing::write_text(spec, "table a : -> number.\ntable b : -> number.\nb[] = 1 / a[].\n");
  RunConfig c;
  c.command = Command::Eval;
  c.spec_path = spec.string();
  auto o = run_cli(c);
  EXPECT_EQ(o.code, kRuntimeError);
  EXPECT_NE(o.err.find("b[]"), std::string::npos);
}

TEST_F(Cli, BadInputsAreSpecErrors) {
  RunConfig c = config(Command::Eval, "cash_flow");
  const fs::path inputs = dir_ / "bad.csv";
  testing::write_text(inputs, "initial_cash,abc\n");
  c.inputs_path = inputs.string();
  EXPECT_EQ(run_cli(c).code, kSpecError);
  c.inputs_path = (dir_ / "absent.csv").string();
  EXPECT_EQ(run_cli(c).code, kIoError);
}

TEST_F(Cli, CompileAndVerify) {
  for (const char* name : {"cash_flow", "borrowing", "loans"}) {
    RunConfig c = config(Command::Compile, name);
    c.out_dir = (dir_ / name).string();
    ASSERT_EQ(run_cli(c).code, kOk) << name;
    RunConfig v;
    v.command = Command::Verify;
    v.spec_path = *c.out_dir;
    auto o = run_cli(v);
    EXPECT_EQ(o.code, kOk) << name << o.out;
    EXPECT_NE(o.out.find("mismatches: 0\n"), std::string::npos);
  }
  const SheetGrid f = parse_csv(testing::read_text(dir_ / "cash_flow" / "Model.formulas.csv"));
  EXPECT_EQ(f.get(3, 5), "=D3-B3");
  const SheetGrid g = parse_csv(testing::read_text(dir_ / "loans" / "Model.formulas.csv"));
  EXPECT_EQ(g.get(3, 8), "=MATCH(TRUE,B25:E25,0)");
}

TEST_F(Cli, VerifyFailures) {
  RunConfig c = config(Command::Compile, "borrowing");
  c.out_dir = (dir_ / "out").string();
  ASSERT_EQ(run_cli(c).code, kOk);

  const fs::path values = dir_ / "out" / "Model.values.csv";
  SheetGrid g = parse_csv(testing::read_text(values));
  g.set(7, 5, "96.00");
  testing::write_text(values, to_csv(g));
  RunConfig v;
  v.command = Command::Verify;
  v.spec_path = *c.out_dir;
  auto o = run_cli(v);
  EXPECT_EQ(o.code, kSpecError);
  EXPECT_NE(o.out.find("Model!E7"), std::string::npos);

  fs::remove(dir_ / "out" / "manifest.json");
  EXPECT_EQ(run_cli(v).code, kIoError);
  v.spec_path = (dir_ / "nowhere").string();
  EXPECT_EQ(run_cli(v).code, kIoError);
}

TEST_F(Cli, UnwritableOutputDirectory) {
  const fs::path blocker = dir_ / "file";
  testing::write_text(blocker, "x");
  RunConfig c = config(Command::Compile, "cash_flow");
  c.out_dir = (blocker / "sub").string();
  EXPECT_EQ(run_cli(c).code, kIoError);
  c.out_dir.reset();
  EXPECT_EQ(run_cli(c).code, kIoError);
}

TEST_F(Cli, CompileIsIdempotent) {
  RunConfig c = config(Command::Compile, "loans");
  c.out_dir = (dir_ / "one").string();
  ASSERT_EQ(run_cli(c).code, kOk);
  const auto first = directory_bytes(*c.out_dir);
  ASSERT_EQ(run_cli(c).code, kOk);
  EXPECT_EQ(directory_bytes(*c.out_dir), first);
  c.out_dir = (dir_ / "two").string();
  ASSERT_EQ(run_cli(c).code, kOk);
  EXPECT_EQ(directory_bytes(*c.out_dir), first);
}

TEST_F(Cli, CaptionTableOverride) {
  RunConfig c = config(Command::Compile, "cash_flow");
  c.caption_table = "";
  c.out_dir = (dir_ / "flat").string();
  ASSERT_EQ(run_cli(c).code, kOk);
  EXPECT_FALSE(fs::exists(dir_ / "flat" / "Time.formulas.csv"));
  c.caption_table = "expenses";
  EXPECT_EQ(run_cli(c).code, kSpecError);
}

}  // namespace
}  // namespace gridspec::cli
