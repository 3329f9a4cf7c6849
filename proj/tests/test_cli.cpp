#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code{-1};
  std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "cli_output.log";
  const std::string cmd = std::string("\"") + EEGCX_CLI_PATH + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

fs::path scratch_dir(const char* tag) {
  const auto dir = fs::temp_directory_path() / (std::string("eegcx_cli_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate writes a cohort and is byte-deterministic") {
  const auto dir = scratch_dir("generate");
  const std::string common =
      "generate --patients 2 --controls 2 --channels 2 --samples 300 --seed 7 --out ";
  auto r1 = run_cli(common + (dir / "a").string(), dir);
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli(common + (dir / "b").string(), dir);
  REQUIRE(r2.exit_code == 0);

  size_t csvs = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".csv")) ++csvs;
    CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
  }
  CHECK(csvs == 4);
  CHECK(fs::exists(dir / "a" / "manifest.json"));
  CHECK(fs::exists(dir / "a" / "run_config.json"));

  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  REQUIRE(manifest.is_array());
  REQUIRE(manifest.size() == 4);
  size_t patients = 0;
  for (const auto& e : manifest) {
    if (e.at("label") == "patient") ++patients;
    CHECK(e.contains("file"));
    CHECK(e.contains("subject_id"));
    CHECK(e.contains("sampling_rate_hz"));
  }
  CHECK(patients == 2);
}

TEST_CASE("generate rejects empty groups with exit code 2") {
  const auto dir = scratch_dir("generate_bad");
  const auto r = run_cli("generate --patients 0 --out " + (dir / "x").string(), dir);
  CHECK(r.exit_code == 2);
}

TEST_CASE("extract computes the feature csv") {
  const auto dir = scratch_dir("extract");
  REQUIRE(run_cli("generate --patients 2 --controls 2 --channels 2 --samples 300 --seed 3 --out " +
                      (dir / "cohort").string(),
                  dir)
              .exit_code == 0);

  auto r = run_cli("extract --manifest " + (dir / "cohort" / "manifest.json").string() +
                       " --out " + (dir / "feat").string(),
                   dir);
  REQUIRE(r.exit_code == 0);
  const auto csv = slurp(dir / "feat" / "features.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "subject_id,label,HFD:Fp1,HFD:Fp2,SampEn:Fp1,SampEn:Fp2");
  size_t rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);

  // Single-channel extraction narrows the matrix to HFD/SampEn of one lead.
  auto r1 = run_cli("extract --manifest " + (dir / "cohort" / "manifest.json").string() +
                        " --channels Fp1 --out " + (dir / "feat1").string(),
                    dir);
  REQUIRE(r1.exit_code == 0);
  std::istringstream lines1(slurp(dir / "feat1" / "features.csv"));
  std::getline(lines1, header);
  CHECK(header == "subject_id,label,HFD:Fp1,SampEn:Fp1");
}

TEST_CASE("extract error exits") {
  const auto dir = scratch_dir("extract_bad");
  CHECK(run_cli("extract --manifest " + (dir / "nope.json").string() + " --out " +
                    (dir / "out").string(),
                dir)
            .exit_code == 3);

  {
    std::ofstream f(dir / "manifest.json");
    f << R"([{"file":"ghost.csv","subject_id":"s1","label":"patient","sampling_rate_hz":1000}])";
  }
  const auto r = run_cli("extract --manifest " + (dir / "manifest.json").string() + " --out " +
                             (dir / "out").string(),
                         dir);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("ghost.csv") != std::string::npos);
}

TEST_CASE("evaluate writes reports and is byte-deterministic") {
  const auto dir = scratch_dir("evaluate");
  REQUIRE(run_cli("generate --patients 4 --controls 4 --channels 2 --samples 400 --seed 11 --out " +
                      (dir / "cohort").string(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("extract --manifest " + (dir / "cohort" / "manifest.json").string() + " --out " +
                      (dir / "feat").string(),
                  dir)
              .exit_code == 0);

  const std::string eval_args = "evaluate --features " + (dir / "feat" / "features.csv").string() +
                                " --folds 4 --pc 1,2 --seed 5 --out ";
  REQUIRE(run_cli(eval_args + (dir / "r1").string(), dir).exit_code == 0);
  REQUIRE(run_cli(eval_args + (dir / "r2").string(), dir).exit_code == 0);
  CHECK(slurp(dir / "r1" / "report.json") == slurp(dir / "r2" / "report.json"));
  CHECK(slurp(dir / "r1" / "report.txt") == slurp(dir / "r2" / "report.txt"));
  CHECK(fs::exists(dir / "r1" / "loadings.csv"));
  CHECK(fs::exists(dir / "r1" / "loadings_abs.csv"));

  const auto report = nlohmann::json::parse(slurp(dir / "r1" / "report.json"));
  CHECK(report.at("mode") == "proper");
  CHECK(report.at("cells").size() == 7 * 2);
  CHECK(report.at("config").at("seed") == 5);

  // Leaky mode stamps every artifact.
  REQUIRE(run_cli(eval_args + (dir / "leaky").string() + " --mode leaky", dir).exit_code == 0);
  CHECK(slurp(dir / "leaky" / "report.json").find("LEAKY") != std::string::npos);
  CHECK(slurp(dir / "leaky" / "report.txt").find("LEAKY") != std::string::npos);
}

TEST_CASE("evaluate config errors exit with 2") {
  const auto dir = scratch_dir("evaluate_bad");
  REQUIRE(run_cli("generate --patients 2 --controls 2 --channels 1 --samples 300 --seed 2 --out " +
                      (dir / "cohort").string(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("extract --manifest " + (dir / "cohort" / "manifest.json").string() + " --out " +
                      (dir / "feat").string(),
                  dir)
              .exit_code == 0);
  const std::string features = (dir / "feat" / "features.csv").string();
  CHECK(run_cli("evaluate --features " + features + " --folds 2 --pc 50 --out " +
                    (dir / "out").string(),
                dir)
            .exit_code == 2);
  CHECK(run_cli("evaluate --features " + features + " --folds 2 --mode sneaky --out " +
                    (dir / "out").string(),
                dir)
            .exit_code == 2);
  CHECK(run_cli("evaluate --features " + (dir / "missing.csv").string() + " --out " +
                    (dir / "out").string(),
                dir)
            .exit_code == 3);
}

TEST_CASE("audit runs and validates") {
  const auto dir = scratch_dir("audit");
  const auto r = run_cli("audit --n 12 --k 4 --seeds 3 --folds 3 --out " + (dir / "a").string(),
                         dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "a" / "audit.json"));
  CHECK(fs::exists(dir / "a" / "audit.csv"));
  const auto doc = nlohmann::json::parse(slurp(dir / "a" / "audit.json"));
  CHECK(doc.at("leakage").size() == 3);

  CHECK(run_cli("audit --seeds 0 --out " + (dir / "b").string(), dir).exit_code == 2);

  const auto rc = run_cli("audit --n 12 --k 4 --seeds 2 --folds 3 --sizes 12,16 --out " +
                              (dir / "c").string(),
                          dir);
  REQUIRE(rc.exit_code == 0);
  const auto curve = nlohmann::json::parse(slurp(dir / "c" / "audit.json"));
  CHECK(curve.at("optimism_curve").size() == 2);
}

TEST_CASE("help and bad flags") {
  const auto dir = scratch_dir("help");
  CHECK(run_cli("--help", dir).exit_code == 0);
  CHECK(run_cli("generate --help", dir).exit_code == 0);
  CHECK(run_cli("frobnicate", dir).exit_code == 2);
  CHECK(run_cli("generate --no-such-flag 1 --out " + (dir / "x").string(), dir).exit_code == 2);
}

}  // TEST_SUITE("cli")
