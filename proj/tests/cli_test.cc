#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "odmetric/cli.h"

namespace odmetric {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("odmetric_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string Read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  // Approaches detected at `far` and `near` with score 0.9, and two weak
  // false alarms. A zero `hours` leaves out the clear segment.
  std::string Log(const std::string& name, double far, double near, double hours = 100.0) {
    std::ostringstream s;
    s << R"({"type":"approach","id":"a1","class":"person","contacted":false,"frames":[{"d":)" << far
      << R"(,"t":0,"s":0.9},{"d":10,"t":30,"s":0.9}]})" << "\n";
    s << R"({"type":"approach","id":"a2","class":"passenger_car","contacted":false,"frames":[{"d":)"
      << near << R"(,"t":0,"s":0.9}]})" << "\n";
    if (hours > 0.0) {
      s << R"({"type":"clear","id":"c1","hours":)" << hours
        << R"(,"alarms":[{"t":10,"s":0.1},{"t":20,"s":0.2}]})" << "\n";
    }
    return Write(name, s.str());
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, EvalPassesMinima) {
  const std::string log = Log("a.jsonl", 800, 700);
  EXPECT_EQ(Run({"eval", "--log", log, "--out-dir", dir_.string()}), kExitOk) << err_.str();
  const json report = json::parse(Read("report.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_EQ(report["braking"]["operating_point"]["dX_m"].get<double>(), 800.0);
  EXPECT_EQ(report["braking"]["operating_point"]["fp_count"].get<int>(), 0);
  EXPECT_EQ(Read("curve.csv").rfind("threshold,dX_m,fp_per_h,fp_ordinate\n", 0), 0u);
  EXPECT_NE(Read("curve.svg").find("<svg"), std::string::npos);
}

TEST_F(CliTest, EvalFailsMinima) {
  const std::string log = Log("a.jsonl", 400, 300);
  EXPECT_EQ(Run({"eval", "--log", log, "--out-dir", dir_.string()}), kExitGateFailed);
  EXPECT_NE(out_.str().find("minima: fail"), std::string::npos);
  EXPECT_EQ(Run({"eval", "--log", log, "--out-dir", dir_.string(), "--fp-budget-braking", "-1"}),
            kExitInputError);
}

TEST_F(CliTest, EvalWithoutExposure) {
  const std::string log = Log("a.jsonl", 800, 700, 0.0);
  EXPECT_EQ(Run({"eval", "--log", log, "--out-dir", dir_.string()}), kExitInputError);
  EXPECT_NE(err_.str().find("no exposure"), std::string::npos);
}

TEST_F(CliTest, EvalBadInput) {
  EXPECT_EQ(Run({"eval", "--log", (dir_ / "missing.jsonl").string()}), kExitInputError);
  const std::string log = Write("bad.jsonl", "{\"type\":\"approach\"\n");
  EXPECT_EQ(Run({"eval", "--log", log, "--out-dir", dir_.string()}), kExitInputError);
  EXPECT_NE(err_.str().find("line 1"), std::string::npos);
  EXPECT_EQ(Run({"frobnicate"}), kExitInputError);
  EXPECT_EQ(Run({"--help"}), kExitOk);
}

TEST_F(CliTest, CompareIdenticalAndDominated) {
  const std::string a = Log("a.jsonl", 800, 700);
  const std::string b = Log("b.jsonl", 500, 400);
  EXPECT_EQ(Run({"compare", "--log", a, "--log", a, "--out-dir", dir_.string()}), kExitOk);
  EXPECT_NE(out_.str().find("no preference"), std::string::npos);
  EXPECT_EQ(Run({"compare", "--log", a, "--log", b, "--out-dir", dir_.string()}), kExitOk);
  EXPECT_NE(out_.str().find("A dominates"), std::string::npos);
  EXPECT_EQ(json::parse(Read("compare.json"))["summary"], "A dominates");
}

TEST_F(CliTest, CompareRejectsMismatchedX) {
  const std::string a = Log("a.jsonl", 800, 700);
  const std::string c50 = Write("c50.json", R"({"x_percent": 50})");
  const std::string c90 = Write("c90.json", R"({"x_percent": 90})");
  EXPECT_EQ(Run({"compare", "--log", a, "--log", a, "--config", c50, "--config", c90, "--out-dir",
                 dir_.string()}),
            kExitInputError);
  EXPECT_NE(err_.str().find("x_percent mismatch"), std::string::npos);
}

TEST_F(CliTest, RiskScalesWithAppearanceRate) {
  const std::string log = Log("a.jsonl", 500, 100);
  auto config = [&](const std::string& name, const std::string& person, const std::string& car) {
    return Write(name, R"({"odd": {"escape_time": "10 s", "scenario_rates": {"person": ")" + person +
                           R"(", "car": ")" + car + R"(", "other": "0 /h"}}})");
  };
  const std::string single = config("r1.json", "1e-6 /h", "1e-7 /h");
  const std::string dbl = config("r2.json", "2e-6 /h", "2e-7 /h");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", single, "--out-dir", dir_.string()}),
            kExitGateFailed);
  const double r1 = json::parse(Read("risk.json"))["rates"]["single_per_h"].get<double>();
  EXPECT_EQ(Run({"risk", "--log", log, "--config", dbl, "--out-dir", dir_.string()}), kExitGateFailed);
  const double r2 = json::parse(Read("risk.json"))["rates"]["single_per_h"].get<double>();
  // Both approaches collide; the car at 100 m has no time to escape.
  EXPECT_DOUBLE_EQ(r1, 1.1e-6);
  EXPECT_DOUBLE_EQ(r2, 2.0 * r1);

  const std::string low = config("r3.json", "1e-9 /h", "1e-9 /h");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", low, "--out-dir", dir_.string()}), kExitOk)
      << err_.str();
}

TEST_F(CliTest, RiskNeedsEscapeTimeAndRates) {
  const std::string log = Log("a.jsonl", 500, 100);
  const std::string no_escape = Write("c.json", R"({"odd": {"obstacle_rate": "1e-6 /h"}})");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", no_escape}), kExitInputError);
  const std::string no_rates = Write("d.json", R"({"odd": {"escape_time": "10 s"}})");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", no_rates, "--out-dir", dir_.string()}),
            kExitInputError);
  EXPECT_NE(err_.str().find("missing scenario data"), std::string::npos);
  const std::string unitless = Write("e.json", R"({"odd": {"line_speed": 130}})");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", unitless}), kExitInputError);
  EXPECT_NE(err_.str().find("ambiguous"), std::string::npos);
}

TEST_F(CliTest, RiskReferenceComparison) {
  const std::string log = Log("a.jsonl", 500, 100);
  const std::string cfg = Write("c.json", R"({"odd": {"escape_time": "10 s", "scenario_rates": {"person": "1e-12 /h", "car": "1e-12 /h", "other": "0 /h"}},
      "reference": [{"object": "person", "condition": "day"}]})");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", cfg, "--out-dir", dir_.string()}), kExitOk);
  EXPECT_NE(out_.str().find("reference person (day)"), std::string::npos);
  const std::string car = Write("d.json", R"({"odd": {"escape_time": "10 s", "scenario_rates": {"person": "1e-12 /h", "car": "1e-12 /h", "other": "0 /h"}},
      "reference": [{"object": "passenger_car", "condition": "day"}]})");
  EXPECT_EQ(Run({"risk", "--log", log, "--config", car, "--out-dir", dir_.string()}),
            kExitGateFailed);
}

TEST_F(CliTest, SimulateThenEval) {
  const std::string cfg = Write("sim.json", R"({"model": {"d50": "300 m", "slope": "30 m",
      "max_range": "600 m", "fp_rate": "0.01 /h", "noise_amplitude": 0.1},
      "sim": {"seed": 3, "n_approaches": 50, "clear_hours": "100 h"}, "output": "sim.jsonl"})");
  EXPECT_EQ(Run({"simulate", "--config", cfg, "--out-dir", dir_.string()}), kExitOk) << err_.str();
  const std::string first = Read("sim.jsonl");
  EXPECT_EQ(Run({"simulate", "--config", cfg, "--out-dir", dir_.string()}), kExitOk);
  EXPECT_EQ(Read("sim.jsonl"), first);
  EXPECT_EQ(Run({"simulate", "--config", cfg, "--seed", "4", "--out-dir", dir_.string()}), kExitOk);
  EXPECT_NE(Read("sim.jsonl"), first);
  EXPECT_EQ(Run({"eval", "--log", (dir_ / "sim.jsonl").string(), "--out-dir", dir_.string()}),
            kExitGateFailed);
}

TEST_F(CliTest, Validate) {
  const std::string good = Write("good.jsonl",
                                 R"({"system":"s1","x":50,"fp_per_h":1e-4,"dist_m":700})" "\n");
  EXPECT_EQ(Run({"validate", good}), kExitOk);
  EXPECT_NE(out_.str().find("record 1 (s1): pass"), std::string::npos);
  const std::string bad = Write("bad.jsonl",
                                R"({"system":"s1","x":50,"fp_per_h":1e-4,"dist_m":700})" "\n"
                                R"({"system":"","x":150,"fp_per_h":-1,"dist_m":700})" "\n");
  EXPECT_EQ(Run({"validate", bad}), kExitGateFailed);
  EXPECT_NE(out_.str().find("x_percent out of (0,100]"), std::string::npos);
  EXPECT_NE(out_.str().find("negative rate"), std::string::npos);
}

}  // namespace
}  // namespace odmetric
