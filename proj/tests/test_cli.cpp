#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "cwc/closed_form.hpp"
#include "cwc/trajectory.hpp"

using namespace cwc;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cwc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    path_ = std::filesystem::temp_directory_path() /
            ("cwc_test_" + std::to_string(counter_++) + "_" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".csv");
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

const char* kPatch[] = {"--X", "1", "--Y", "1", "--mu", "0.5"};

std::vector<std::string> with_patch(std::string cmd, std::vector<std::string> rest) {
  std::vector<std::string> a{std::move(cmd)};
  a.insert(a.end(), std::begin(kPatch), std::end(kPatch));
  a.insert(a.end(), rest.begin(), rest.end());
  return a;
}

}  // namespace

TEST(TrajectoryParse, ReadsRecords) {
  std::istringstream in(
      "# comment\n"
      "t,fx,fy,fz,taux,tauy,tauz\n"
      "0.0,0,0,600,1.5,-3.0,0.2\n"
      "\n"
      "0.01, 1, 2, 610, 1, 1, 0\n");
  const auto t = parse_trajectory(in);
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_EQ(t.records[0].wrench.fz(), 600.0);
  EXPECT_EQ(t.records[0].line, 3u);
  EXPECT_EQ(t.records[1].t, 0.01);
  EXPECT_EQ(t.records[1].line, 5u);
}

TEST(TrajectoryParse, StrictModeReportsLineNumber) {
  std::istringstream in("t,fx,fy,fz,taux,tauy,tauz\n0,0,0,1,0,0,0\n1,0,0,abc,0,0,0\n");
  try {
    parse_trajectory(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(TrajectoryParse, LenientModeSkipsBadLines) {
  std::istringstream in(
      "t,fx,fy,fz,taux,tauy,tauz\n0,0,0,1,0,0,0\n1,0,0,1,0,0\n0,0,0,1,0,0,0\n2,0,0,nan,0,0,0\n3,0,0,1,0,0,0\n");
  const auto t = parse_trajectory(in, false);
  EXPECT_EQ(t.records.size(), 2u);
  ASSERT_EQ(t.skipped.size(), 3u);
  EXPECT_EQ(t.skipped[0].line, 3u);
  EXPECT_EQ(t.skipped[1].line, 4u);
  EXPECT_EQ(t.skipped[2].line, 5u);
}

TEST(TrajectoryParse, HeaderIsRequired) {
  std::istringstream wrong("t,fx,fy,fz\n0,0,0,1\n");
  EXPECT_THROW(parse_trajectory(wrong, false), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(parse_trajectory(empty), ParseError);
}

TEST(ParseWrench, Strict) {
  EXPECT_EQ(parse_wrench("1,2,3,4,5,6").vector(), (Vector6d() << 1, 2, 3, 4, 5, 6).finished());
  EXPECT_THROW(parse_wrench("1,2,3,4,5"), InvalidArgument);
  EXPECT_THROW(parse_wrench("1,2,3,4,5,6,7"), InvalidArgument);
  EXPECT_THROW(parse_wrench("1,2,x,4,5,6"), InvalidArgument);
  EXPECT_THROW(parse_wrench("1,2,3,4,5,inf"), InvalidArgument);
}

TEST(Cli, CheckMemberAndNonMember) {
  auto r = run(with_patch("check", {"--wrench", "0,0,10,0,0,0"}));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("MEMBER"), std::string::npos);

  r = run(with_patch("check", {"--wrench", "0,0,10,0,0,10.01"}));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("NOT MEMBER"), std::string::npos);
  EXPECT_NE(r.out.find("W6max"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(with_patch("check", {"--wrench", "0,0,10,0,0"})).code, 2);
  EXPECT_EQ(run(with_patch("check", {"--wrench", "a,b,c,d,e,f"})).code, 2);
  EXPECT_EQ(run({"check", "--X", "1", "--Y", "1", "--wrench", "0,0,1,0,0,0"}).code, 2);
  EXPECT_EQ(run({"check", "--X", "-1", "--Y", "1", "--mu", "1", "--wrench", "0,0,1,0,0,0"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run(with_patch("check", {"--wrench", "0,0,1,0,0,0", "--format", "xml"})).code, 2);
}

TEST(Cli, MachineOutputRoundTrips) {
  Rng rng(73);
  const ContactPatch p(1, 1, 0.5);
  for (int i = 0; i < 200; ++i) {
    const Wrench w(uniform(rng, -6, 6), uniform(rng, -6, 6), uniform(rng, -1, 10),
                   uniform(rng, -12, 12), uniform(rng, -12, 12), uniform(rng, -12, 12));
    std::ostringstream text;
    text.precision(17);
    text << w.fx() << ',' << w.fy() << ',' << w.fz() << ',' << w.taux() << ',' << w.tauy() << ','
         << w.tauz();
    const auto r = run(with_patch("check", {"--wrench", text.str(), "--format", "machine"}));
    const auto j = lines(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["schema_version"], cli::kSchemaVersion);
    EXPECT_EQ(j[0]["kind"], "check");
    const auto back = j[0]["wrench"].get<std::vector<double>>();
    const Wrench again(back[0], back[1], back[2], back[3], back[4], back[5]);
    EXPECT_EQ(again.vector(), w.vector());
    const auto report = check_wrench(p, again);
    EXPECT_EQ(j[0]["member"].get<bool>(), report.member);
    EXPECT_EQ(r.code, report.member ? 0 : 1);
    EXPECT_EQ(j[0]["min_margin"].get<double>(), report.min_margin);
    EXPECT_EQ(j[0]["margins"].size(), kNumFaces);
  }
}

TEST(Cli, ConeFaceAndSpanCounts) {
  auto j = lines(run(with_patch("cone", {"--format", "machine"})).out);
  EXPECT_EQ(j.size(), 16u);
  j = lines(run(with_patch("cone", {"--form", "span", "--format", "machine"})).out);
  EXPECT_EQ(j.size(), 16u);
  auto r = run({"cone", "--X", "1", "--Y", "1", "--mu", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("ZeroFriction"), std::string::npos);
  r = run({"cone", "--X", "1", "--Y", "1", "--mu", "0", "--exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("EQUIVALENT"), std::string::npos);
}

TEST(Cli, ConeExactMatches) {
  const auto r = run(with_patch("cone", {"--exact"}));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("MATCH"), std::string::npos);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
}

TEST(Cli, ReconstructExitCodes) {
  auto r = run(with_patch("reconstruct", {"--wrench", "0,0,4,0,0,0", "--format", "machine"}));
  EXPECT_EQ(r.code, 0);
  const auto j = lines(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_TRUE(j[0]["feasible"].get<bool>());
  EXPECT_NEAR(j[0]["forces"][2][2].get<double>(), 1.0, 1e-12);
  r = run(with_patch("reconstruct", {"--wrench", "6,0,10,0,0,0"}));
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, TrajectoryAllMembers) {
  TempFile f("t,fx,fy,fz,taux,tauy,tauz\n0,0,0,10,0,0,0\n0.1,1,0,10,0.5,0.5,1\n");
  const auto r = run(with_patch("trajectory", {"--input", f.path()}));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("violations 0"), std::string::npos);
}

TEST(Cli, TrajectoryFlagsYawViolation) {
  TempFile f("t,fx,fy,fz,taux,tauy,tauz\n0,0,0,10,0,0,0\n0.1,0,0,10,0,0,10.01\n0.2,0,0,10,0,0,1\n");
  const auto r = run(with_patch("trajectory", {"--input", f.path(), "--format", "machine"}));
  EXPECT_EQ(r.code, 1);
  const auto j = lines(r.out);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_TRUE(j[0]["member"].get<bool>());
  EXPECT_FALSE(j[1]["member"].get<bool>());
  EXPECT_EQ(j[1]["violated"][0].get<std::string>().substr(0, 2), "W6");
  EXPECT_EQ(j[3]["kind"], "trajectory_summary");
  EXPECT_EQ(j[3]["violations"], 1);
  EXPECT_DOUBLE_EQ(j[3]["worst"]["t"].get<double>(), 0.1);
}

TEST(Cli, TrajectoryScaledAreaShrinksMemberSet) {
  Rng rng(79);
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,fx,fy,fz,taux,tauy,tauz\n";
  for (int i = 0; i < 300; ++i) {
    csv << i * 0.01 << ',' << uniform(rng, -5, 5) << ',' << uniform(rng, -5, 5) << ','
        << uniform(rng, 0, 10) << ',' << uniform(rng, -10, 10) << ',' << uniform(rng, -10, 10)
        << ',' << uniform(rng, -10, 10) << '\n';
  }
  TempFile f(csv.str());
  const auto r = run(with_patch("trajectory", {"--input", f.path(), "--scale-area", "0.45",
                                               "--format", "machine"}));
  const auto j = lines(r.out);
  ASSERT_EQ(j.size(), 301u);
  std::size_t shrunk = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const bool full = j[i]["member"].get<bool>();
    const bool scaled = j[i]["scaled"]["member"].get<bool>();
    EXPECT_TRUE(full || !scaled);
    if (full && !scaled) ++shrunk;
  }
  EXPECT_GT(shrunk, 0u);
  EXPECT_GE(j[300]["scaled_violations"].get<std::size_t>(), j[300]["violations"].get<std::size_t>());
}

TEST(Cli, TrajectoryStrictAndLenient) {
  TempFile f("t,fx,fy,fz,taux,tauy,tauz\n0,0,0,10,0,0,0\n0.1,0,0,ten,0,0,0\n0.2,0,0,10,0,0,0\n");
  auto r = run(with_patch("trajectory", {"--input", f.path()}));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  r = run(with_patch("trajectory", {"--input", f.path(), "--lenient"}));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("skipped line 3"), std::string::npos);
  EXPECT_EQ(run(with_patch("trajectory", {"--input", "/nonexistent/file.csv"})).code, 2);
  EXPECT_EQ(run(with_patch("trajectory", {"--input", f.path(), "--strict", "--lenient"})).code, 2);
}

TEST(Cli, ValidateIsDeterministic) {
  const std::vector<std::string> args{"validate", "--X", "0.05,0.3", "--Y", "0.1", "--mu",
                                      "0.5",      "--samples", "300", "--seed", "5"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, 0) << a.out << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("PASS"), std::string::npos);
  EXPECT_NE(a.err.find("validation time"), std::string::npos);
  EXPECT_EQ(run({"validate", "--samples", "0"}).code, 2);
}

TEST(Cli, ValidateMachineSummary) {
  const auto r = run({"validate", "--X", "0.1", "--Y", "0.1", "--mu", "1", "--samples", "200",
                      "--format", "machine", "--no-reconstruction"});
  const auto j = lines(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["kind"], "validate_patch");
  EXPECT_EQ(j[0]["reconstruction_checked"], 0);
  EXPECT_EQ(j[1]["kind"], "validate_summary");
  EXPECT_TRUE(j[1]["passed"].get<bool>());
}
