#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "workspace.hpp"

using namespace tcx;
using namespace tcx::app;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(TWISTEDCX_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(TWISTEDCX_FIXTURE_DIR))
    if (e.path().extension() == ".json") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

CommandResult run(const std::string& command, const std::string& file, std::string& rendered, bool machine = false,
                  std::optional<std::string> field = std::nullopt, std::optional<std::string> name = std::nullopt) {
  Invocation inv;
  inv.command = command;
  inv.input_text = fixture(file);
  inv.machine = machine;
  inv.field = std::move(field);
  inv.options.name = std::move(name);
  return invoke(inv, rendered);
}

}  // namespace

TEST(Parse, OneOpenZeroComplexIsValid) {
  Workspace ws = parse_workspace(fixture("one_open_zero.json"));
  EXPECT_EQ(ws.nerve->size(), 1);
  EXPECT_TRUE(ws.warnings.empty());
  ASSERT_EQ(ws.twisted.size(), 1u);
  EXPECT_TRUE(ws.twisted[0].twisted.locals->is_zero());
  EXPECT_EQ(run_command(ws, "validate").exit_code, kPass);
}

TEST(Parse, FacesAreClosedWithWarning) {
  Workspace ws = parse_workspace(fixture("not_closed_faces.json"));
  EXPECT_EQ(ws.nerve->faces().size(), 7u);
  ASSERT_EQ(ws.warnings.size(), 1u);
  EXPECT_NE(ws.warnings[0].find("closure"), std::string::npos);
  std::string out;
  EXPECT_EQ(run("validate", "not_closed_faces.json", out).exit_code, kPass);
  EXPECT_NE(out.find("closure applied"), std::string::npos);
}

TEST(Parse, NonNaturalComponentNamesTupleAndFace) {
  try {
    parse_workspace(fixture("non_natural.json"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.object, "bad");
    EXPECT_NE(e.reason.find("(U)"), std::string::npos) << e.reason;
    EXPECT_NE(e.reason.find("{U,V}"), std::string::npos) << e.reason;
  }
}

TEST(Parse, SyntaxErrorIsLocated) {
  try {
    parse_workspace(fixture("syntax_error.json"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3);
    EXPECT_EQ(e.col, 20);
  }
}

TEST(Parse, RejectsUnknownKeysAndUndefinedNames) {
  EXPECT_THROW(parse_workspace(R"({"opens":["U"],"extra":1})"), ValidationError);
  EXPECT_THROW(parse_workspace(R"({"opens":["U"],"twisted":{"T":{"twist":"P"}}})"), ValidationError);
  EXPECT_THROW(parse_workspace(R"({"opens":["U","U"]})"), ValidationError);
  EXPECT_THROW(parse_workspace(R"({"opens":["U"],"presheaves":{"P":{"constant":{"0":1},
      "differential":{"0":[["1","2"]]}}}})"),
               ValidationError);
}

TEST(Parse, ExactMatrixEntries) {
  Workspace ws = parse_workspace(R"({"field":"fp:7","opens":["U"],"presheaves":{"P":{"constant":{"0":1,"1":1},
      "differential":{"0":[["-1/2"]]}}}})");
  // -1/2 = 3 in F_7
  EXPECT_EQ(ws.presheaves[0].complex.diff(0b1).at(0).at(0, 0), Scalar(3, Field::prime(7)));
}

TEST(RoundTrip, SerializeThenParseIsEqual) {
  for (const auto& name : fixture_names()) {
    std::unique_ptr<Workspace> ws;
    try {
      ws = std::make_unique<Workspace>(parse_workspace(fixture(name)));
    } catch (const std::exception&) {
      continue;  // the error fixtures
    }
    std::string once = serialize_workspace(*ws).dump(2);
    Workspace back = parse_workspace(once);
    EXPECT_TRUE(workspace_equal(*ws, back)) << name;
    EXPECT_EQ(serialize_workspace(back).dump(2), once) << name;
  }
}

TEST(Commands, ValidateTwistDatum) {
  std::string out;
  EXPECT_EQ(run("validate", "circle_constant.json", out).exit_code, kPass);
}

TEST(Commands, ZeroMapExampleIsNotAWeakEquivalence) {
  std::string out;
  CommandResult res = run("check-weq", "interval_zero_datum.json", out);
  EXPECT_EQ(res.exit_code, kCheckFailed);
  EXPECT_NE(out.find("not a weak equivalence"), std::string::npos) << out;
  EXPECT_NE(out.find("acyclic"), std::string::npos) << out;
}

TEST(Commands, ResolveThenCheckComparison) {
  std::string out;
  EXPECT_EQ(run("resolve", "interval_resolved.json", out, false, std::nullopt, "RQ").exit_code, kPass) << out;
  EXPECT_EQ(run("check-weq", "interval_resolved.json", out, false, std::nullopt, "cmp").exit_code, kPass) << out;
  // P is not perfect: its restriction U -> U,V drops a cohomology class
  EXPECT_EQ(run("resolve", "interval_resolved.json", out).exit_code, kCheckFailed);
}

TEST(Commands, FiberProductNeedsTwoOpens) {
  std::string out;
  EXPECT_EQ(run("fiber-product", "circle_constant.json", out).exit_code, kInputError);
}

TEST(Commands, FieldOverride) {
  std::string out;
  EXPECT_EQ(run("validate", "circle_constant.json", out, true, "fp:101").exit_code, kPass);
  EXPECT_NE(out.find("\"fp:101\""), std::string::npos);
  EXPECT_EQ(run("validate", "circle_constant.json", out, false, "fp:100").exit_code, kInputError);
  EXPECT_EQ(run("validate", "circle_constant.json", out, false, "reals").exit_code, kInputError);
}

TEST(Commands, UnknownCommandIsInputError) {
  std::string out;
  EXPECT_EQ(run("frobnicate", "circle_constant.json", out).exit_code, kInputError);
}

TEST(Commands, MachineReportSchema) {
  std::string out;
  run("cohomology", "circle_constant.json", out, true);
  Json j = Json::parse(out);
  EXPECT_EQ(j["command"], "cohomology");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(j["items"].is_array());
  for (const auto& item : j["items"]) {
    EXPECT_TRUE(item.contains("object"));
    EXPECT_TRUE(item.contains("status"));
  }
}

TEST(Determinism, ByteIdenticalReportsAndAllExitCodes) {
  std::set<int> codes;
  for (const auto& name : fixture_names())
    for (const auto& cmd : command_names())
      for (bool machine : {false, true}) {
        std::string a, b;
        int ca = run(cmd, name, a, machine).exit_code;
        int cb = run(cmd, name, b, machine).exit_code;
        ASSERT_EQ(ca, cb) << cmd << " " << name;
        ASSERT_EQ(a, b) << cmd << " " << name;
        codes.insert(ca);
      }
  EXPECT_EQ(codes, (std::set<int>{kPass, kCheckFailed, kInputError}));
}
