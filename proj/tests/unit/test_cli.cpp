#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "lich/cli.hpp"
#include "lich/error.hpp"

using lich::cli::RunConfig;
using lich::cli::Task;

namespace {

lich::cli::ParseOutcome parse(std::vector<std::string> args) {
  args.insert(args.begin(), "lich");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return lich::cli::parse_command_line(int(argv.size()), argv.data());
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "lich_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

nlohmann::json without_timestamp(nlohmann::json report) {
  report["report"].erase("timestamp");
  return report;
}

}  // namespace

TEST_CASE("resolution strings") {
  CHECK(lich::cli::parse_resolution("32") == std::vector<int>{32});
  CHECK(lich::cli::parse_resolution("32x64") == std::vector<int>{32, 64});
  CHECK(lich::cli::parse_resolution("6,6,6") == std::vector<int>{6, 6, 6});
  for (const char* bad : {"", "x", "32x", "a", "0", "-4", "3.5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(lich::cli::parse_resolution(bad), lich::Error);
  }
}

TEST_CASE("command-line parsing") {
  auto ok = parse({"--task", "check", "--space", "sphere:n=2", "--p", "2", "--class", "symmetric", "--c", "-1",
                   "--res", "16x32", "--k", "4", "--kernel-tol", "1e-6", "--seed", "9", "--out", "r.json"});
  REQUIRE(ok.config);
  CHECK(ok.config->task == Task::check);
  CHECK(ok.config->p == 2);
  CHECK(ok.config->c == -1.0);
  CHECK(ok.config->cls == lich::SymmetryClass::symmetric);
  CHECK(ok.config->resolution == std::vector<int>{16, 32});
  CHECK(ok.config->kernel_tol == 1e-6);
  CHECK(ok.config->seed == 9u);

  CHECK(parse({"--task", "curvature", "--space", "sphere:n=3", "--bogus", "1"}).status == lich::cli::kConfigError);
  CHECK(parse({"--space", "sphere:n=3"}).status == lich::cli::kConfigError);
  CHECK(parse({"--task", "fly", "--space", "sphere:n=3"}).status == lich::cli::kConfigError);
  CHECK(parse({"--task", "spectrum", "--space", "torus:n=2", "--kernel-tol", "0"}).status == lich::cli::kConfigError);
  CHECK(parse({"--task", "spectrum", "--space", "torus:n=2", "--k", "0"}).status == lich::cli::kConfigError);
  CHECK(parse({"--task", "spectrum", "--space", "torus:n=2", "--kind", "hodge", "--class", "symmetric"}).status ==
        lich::cli::kConfigError);
  const auto help = parse({"--help"});
  CHECK_FALSE(help.config);
  CHECK(help.status == lich::cli::kOk);
}

TEST_CASE("config file with the flag names as keys") {
  const auto path = scratch_dir() / "run.toml";
  {
    std::ofstream f(path);
    f << "space = \"torus:n=2\"\ntask = \"spectrum\"\np = 1\nkind = \"hodge\"\nk = 6\nres = \"16\"\n"
         "kernel-tol = 1e-6\nseed = 3\n";
  }
  auto out = parse({"--config", path.string()});
  REQUIRE(out.config);
  CHECK(out.config->kind == lich::OperatorKind::hodge);
  CHECK(out.config->seed == 3u);
  CHECK(out.config->kernel_tol == 1e-6);
  // Flags override the file.
  out = parse({"--config", path.string(), "--k", "3"});
  REQUIRE(out.config);
  CHECK(out.config->k == 3);
  {
    std::ofstream f(path, std::ios::app);
    f << "unknown = 1\n";
  }
  CHECK(parse({"--config", path.string()}).status == lich::cli::kConfigError);
}

TEST_CASE("spectrum task on the flat torus") {
  RunConfig cfg;
  cfg.space = "torus:n=2";
  cfg.task = Task::spectrum;
  cfg.p = 1;
  cfg.kind = lich::OperatorKind::hodge;
  cfg.k = 6;
  const auto r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kOk);
  const auto& s = r.report["spectrum"];
  CHECK(s["kernel_dim"] == 2);
  CHECK(s["eigenvalues"][2].get<double>() == doctest::Approx(4 * std::numbers::pi * std::numbers::pi).epsilon(1e-8));
  CHECK(s.contains("kernel_tol"));
  CHECK(s.contains("residual_tolerance"));
  for (const char* section : {"config", "curvature", "spectrum", "verdicts", "identities"})
    CHECK(r.report.contains(section));
  CHECK(r.report["config"]["class"] == "alternating");
}

TEST_CASE("check task reports the stability verdict") {
  RunConfig cfg;
  cfg.space = "sphere:n=3,k=1";
  cfg.task = Task::check;
  cfg.p = 2;
  cfg.kind = lich::OperatorKind::einstein;
  const auto r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kOk);
  bool found = false;
  for (const auto& v : r.report["verdicts"])
    if (v["family"] == "einstein_stability") {
      found = true;
      CHECK(v["rule_label"] == "Theorem 4.2");
      CHECK(v["conclusion"].get<std::string>().find("not unstable") != std::string::npos);
      CHECK(v["rule_fired"].get<std::string>().find("is not an unstable manifold") != std::string::npos);
    }
  CHECK(found);

  cfg.space = "product:sphere2+line";
  CHECK(lich::cli::execute(cfg).status == lich::cli::kCapabilityError);
}

TEST_CASE("check task compares the verdict with the computed kernel") {
  RunConfig cfg;
  cfg.space = "torus:n=2";
  cfg.task = Task::check;
  cfg.p = 2;
  cfg.c = -1.0;
  const auto r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kOk);
  REQUIRE(r.report["identities"].size() == 1);
  CHECK(r.report["identities"][0]["name"] == "verdict_soundness");
  CHECK(r.report["identities"][0]["pass"] == true);
  CHECK(r.report["spectrum"]["kernel_dim"] == 4);
}

TEST_CASE("identity suite on a product of spheres") {
  RunConfig cfg;
  cfg.space = "product:sphere2+sphere2";
  cfg.task = Task::verify_identities;
  const auto r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kOk);
  int three_way = 0;
  for (const auto& id : r.report["identities"]) {
    CHECK(id["pass"] == true);
    CHECK(id.contains("tolerance"));
    CHECK(id.contains("checks"));
    if (id["name"].get<std::string>().rfind("weitzenboeck_", 0) == 0) ++three_way;
  }
  CHECK(three_way >= 9);
}

TEST_CASE("error statuses") {
  RunConfig cfg;
  cfg.space = "hyperbolic:n=3";
  cfg.task = Task::spectrum;
  auto r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kCapabilityError);
  CHECK(r.report["error"]["kind"] == "capability");

  cfg.space = "sphere:n=two";
  r = lich::cli::execute(cfg);
  CHECK(r.status == lich::cli::kConfigError);
  CHECK(r.report["error"]["kind"] == "config");

  cfg.space = "torus:n=2";
  cfg.p = 3;
  CHECK(lich::cli::execute(cfg).status == lich::cli::kCapabilityError);
}

TEST_CASE("reports are deterministic apart from the timestamp") {
  RunConfig cfg;
  cfg.space = "sphere:n=2";
  cfg.task = Task::check;
  cfg.p = 1;
  cfg.resolution = {16, 32};
  cfg.seed = 4;
  const auto a = lich::cli::execute(cfg), b = lich::cli::execute(cfg);
  CHECK(without_timestamp(a.report).dump() == without_timestamp(b.report).dump());
  CHECK(lich::cli::summary_csv(a.report) == lich::cli::summary_csv(b.report));
}

TEST_CASE("report files") {
  CHECK(lich::cli::csv_path("out/report.json") == "out/report.csv");
  CHECK(lich::cli::csv_path("report") == "report.csv");
  RunConfig cfg;
  cfg.space = "sphere:n=3";
  cfg.task = Task::quadratic_form;
  cfg.p = 2;
  cfg.cls = lich::SymmetryClass::symmetric;
  cfg.out = (scratch_dir() / "qf" / "report.json").string();
  CHECK(lich::cli::run(cfg) == lich::cli::kOk);
  std::ifstream json_in(cfg.out);
  const auto report = nlohmann::json::parse(json_in);
  CHECK(report["curvature"]["quadratic_form"]["sign"] == ">=0");
  std::ifstream csv_in(lich::cli::csv_path(cfg.out));
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "section,name,value,tolerance,status,reference");
}
