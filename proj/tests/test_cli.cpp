#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "orifield/io.hpp"
#include "orifield/serialization.hpp"

namespace fs = std::filesystem;
using namespace orifield;

namespace {

struct Outcome {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orifield_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome cli(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string cmd = "cd '" + dir_.string() + "' && '" ORIFIELD_CLI "' " + args + " > '" + out +
                            "' 2> '" + path("stderr.txt") + "'";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  fs::path dir_;
};

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_F(Cli, TensorExamples) {
  Outcome r = cli(R"(tensor --spec '{"kind":"cone","alpha0":0,"delta":0.3}')");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_NEAR(j["orientation"]["coherency"].get<double>(), 0.941071, 5e-7);
  EXPECT_TRUE(j.contains("closed_form"));

  r = cli(R"(tensor --spec '{"kind":"isotropic"}')");
  ASSERT_EQ(r.code, 0);
  j = Json::parse(r.out);
  EXPECT_EQ(j["orientation"]["coherency"].get<double>(), 0.0);
  EXPECT_TRUE(j["orientation"]["degenerate"].get<bool>());

  r = cli(R"(tensor --spec '{"kind":"cone","alpha0":0.7853981633974483,"delta":0.3}' --L 2,0,0,1)");
  ASSERT_EQ(r.code, 0);
  j = Json::parse(r.out);
  EXPECT_NEAR(j["deformed"]["predicted_direction"][0].get<double>(), 0.4472136, 1e-7);
  EXPECT_NEAR(j["deformed"]["predicted_direction"][1].get<double>(), 0.8944272, 1e-7);
  EXPECT_TRUE(fs::exists(path("tensor.config.json")));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli(R"(tensor --spec '{"kind":"bogus"}')").code, 2);
  EXPECT_EQ(cli("validate nope").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli(R"(synth --model '{"family":"afbf","hurst":0.5}' --n 64)").code, 2);
  EXPECT_EQ(cli("synth --model missing.json --n 64").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(Cli, SynthIsDeterministicAndReproducibleFromItsSnapshot) {
  std::ofstream(path("afbf.json")) << R"({"family":"afbf","hurst":0.5,"alpha0":0,"delta":0.3})";
  ASSERT_EQ(cli("synth --model afbf.json --n 64 --seed 7 --out tex --pgm").code, 0);
  for (const char* ext : {".f64", ".json", ".pgm", ".config.json"}) EXPECT_TRUE(fs::exists(path(std::string("tex") + ext)));
  const std::string first = read_file(path("tex.f64"));
  fs::rename(path("tex.f64"), path("first.f64"));
  ASSERT_EQ(cli("--config tex.config.json --threads 3 synth").code, 0);
  EXPECT_EQ(read_file(path("tex.f64")), first);
  // Flags override the file.
  ASSERT_EQ(cli("--config tex.config.json synth --seed 8 --out other").code, 0);
  EXPECT_NE(read_file(path("other.f64")), first);
  EXPECT_EQ(read_json_file(path("other.config.json"))["seed"], 8);
}

TEST_F(Cli, ConfigKeysAreChecked) {
  std::ofstream(path("c.json")) << R"({"synth": {"modle": "x"}})";
  EXPECT_EQ(cli("--config c.json synth").code, 2);
}

TEST_F(Cli, FigureRecipesRun) {
  for (const char* name : {"fig1d_rotation_warp", "fig1b_gafbf", "fig2_conformal"}) {
    const std::string cfg = std::string(ORIFIELD_CONFIGS) + "/" + name + ".json";
    const Outcome r = cli("--config '" + cfg + "' synth --n 128 --out-dir out");
    EXPECT_EQ(r.code, 0) << name;
  }
  EXPECT_TRUE(fs::exists(path("out/fig1d.f64")));
  EXPECT_TRUE(fs::exists(path("out/fig1d.pgm")));
}

TEST_F(Cli, AnalyzeAfbfAndProfiles) {
  ASSERT_EQ(cli(R"(--seed 3 synth --model '{"family":"afbf","hurst":0.5,"alpha0":0,"delta":0.3}' --n 256 --out a)").code, 0);
  Outcome r = cli("analyze a.f64 --window 8 --ppm");
  ASSERT_EQ(r.code, 0);
  const Json s = Json::parse(r.out);
  const double simon = s["global"]["orientation"]["angle_deg"].get<double>();
  EXPECT_LT(std::abs(simon), 3.0);
  EXPECT_NEAR(s["hurst"].get<double>(), 0.5, 0.15);
  EXPECT_TRUE(fs::exists(path("a.analysis.field.f64")));
  EXPECT_TRUE(fs::exists(path("a.analysis.field.ppm")));
  EXPECT_TRUE(fs::exists(path("a.analysis.summary.json")));
  EXPECT_TRUE(fs::exists(path("a.analysis.config.json")));
  EXPECT_EQ(read_raster(path("a.analysis.field")).channels.size(), 2u);

  r = cli("analyze a --profile meyer");
  ASSERT_EQ(r.code, 0);
  const double meyer = Json::parse(r.out)["global"]["orientation"]["angle_deg"].get<double>();
  EXPECT_LT(std::abs(meyer - simon), 2.0);
}

TEST_F(Cli, AnalyzeConstantIsDegenerate) {
  write_raster(path("flat"), {Raster::Constant(64, 64, 1.5)}, {});
  const Outcome r = cli("analyze flat.f64 --window 4");
  ASSERT_EQ(r.code, 0);
  const Json s = Json::parse(r.out);
  EXPECT_TRUE(s["degenerate"].get<bool>());
  EXPECT_TRUE(s["global"]["orientation"]["degenerate"].get<bool>());
  EXPECT_EQ(s["field"]["valid"], 0);
}

TEST_F(Cli, AnalyzeRejectsBadRasters) {
  write_raster(path("r"), {Raster::Zero(64, 64)}, {});
  Json meta = read_json_file(path("r.json"));
  meta["format_version"] = 2;
  write_json_file(path("r.json"), meta);
  EXPECT_EQ(cli("analyze r.f64").code, 2);
  EXPECT_EQ(cli("analyze nothing.f64").code, 2);
}

TEST_F(Cli, ValidateReportsAndExitCode) {
  const Outcome r = cli("validate closedform --out report");
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(path("report.json")));
  EXPECT_LT(j["seconds"].get<double>(), 5.0);
}
