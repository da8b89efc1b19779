#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qwork/experiments.hpp"

using namespace qwork::experiments;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QWORK_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("registry lists the ten experiments with descriptions") {
  CHECK(registry().size() == 10);
  for (const auto& e : registry()) {
    CHECK_FALSE(e.name.empty());
    CHECK(e.description.size() > 20);
    CHECK_FALSE(e.params.empty());
  }
  CHECK(find("exp-ngt") != nullptr);
  CHECK(find("exp-equivariance") != nullptr);
  CHECK(find("exp-does-not-exist") == nullptr);
}

TEST_CASE("validation diagnostics") {
  ExperimentConfig unknown;
  unknown.experiment = "exp-bogus";
  CHECK(validate(unknown).size() == 1);

  // Missing required beta names the field.
  ExperimentConfig no_beta;
  no_beta.experiment = "exp-jarzynski-classical";
  const auto diags = validate(no_beta);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].find("beta") != std::string::npos);

  ExperimentConfig bad_key;
  bad_key.experiment = "exp-ngt";
  bad_key.values["epsilon"] = "1.0";  // not a parameter of exp-ngt
  CHECK_FALSE(validate(bad_key).empty());

  ExperimentConfig bad_value;
  bad_value.experiment = "exp-ngt";
  bad_value.values["eps"] = "one";
  CHECK_FALSE(validate(bad_value).empty());

  ExperimentConfig good;
  good.experiment = "exp-ngt";
  good.values["eps"] = "1.5";
  CHECK(validate(good).empty());
}

TEST_CASE("config files parse with comments and overrides") {
  const auto path = std::filesystem::temp_directory_path() / "qwork_cfg.txt";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "experiment = exp-ngt\n"
        << "eps = 1.25  # trailing comment\n"
        << "eps_prime = -0.5\n";
  }
  const auto config = parse_config_file(path.string());
  CHECK(config.experiment == "exp-ngt");
  CHECK(config.values.at("eps") == "1.25");
  CHECK(config.values.at("eps_prime") == "-0.5");
  CHECK(validate(config).empty());

  const auto resolved = resolve(config);
  CHECK(resolved.at("eps") == doctest::Approx(1.25));
  CHECK(resolved.at("n_random") == doctest::Approx(20));  // default filled in
}

TEST_CASE("identical config and seed give byte-identical CSV artifacts") {
  ExperimentConfig config;
  config.experiment = "exp-ngt";
  const auto resolved = resolve(config);

  const Outcome first = run(resolved);
  const Outcome second = run(resolved);
  REQUIRE(first.tables.size() == second.tables.size());
  for (std::size_t i = 0; i < first.tables.size(); ++i)
    CHECK(first.tables[i].to_csv() == second.tables[i].to_csv());

  // Through the filesystem as well.
  auto base = std::filesystem::temp_directory_path() / "qwork_golden";
  std::filesystem::remove_all(base);
  ResolvedConfig a = resolved, b = resolved;
  a.out_dir = (base / "a").string();
  b.out_dir = (base / "b").string();
  write_outputs(a, first);
  write_outputs(b, second);
  CHECK(slurp(base / "a/exp-ngt/tpm_distribution_ground.csv") ==
        slurp(base / "b/exp-ngt/tpm_distribution_ground.csv"));
  CHECK_FALSE(slurp(base / "a/exp-ngt/tpm_distribution_ground.csv").empty());
}

TEST_CASE("ngt run with eps_prime = 0 reports the agreement case") {
  ExperimentConfig config;
  config.experiment = "exp-ngt";
  config.values["eps_prime"] = "0";
  const Outcome outcome = run(resolve(config));
  CHECK(outcome.passed);
  CHECK(outcome.summary.at("operators_agree").get<bool>());
  REQUIRE_FALSE(outcome.notes.empty());
  CHECK(outcome.notes.front().find("coincide") != std::string::npos);
}

TEST_CASE("csv cells carry full double precision") {
  ResultTable t;
  t.name = "t";
  t.columns = {"a"};
  t.rows = {{1.0 / 3.0}};
  CHECK(t.to_csv() == "a\n3.3333333333333331e-01\n");
}

TEST_CASE("cli: list, run, validate, error paths") {
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("exp-ngt --eps 1 --eps-prime 2 --out /tmp/qwork_cli_test") == 0);
  CHECK(run_cli("exp-nonexistent") == 2);
  CHECK(run_cli("exp-ngt --bogus-param 3") == 2);
  CHECK(run_cli("exp-ngt --n-random -5") == 2);  // counts must be >= 0
  CHECK(run_cli("exp-jarzynski-classical --nonsense 1") == 2);

  const auto bad = std::filesystem::temp_directory_path() / "qwork_bad.txt";
  {
    std::ofstream out(bad);
    out << "experiment = exp-jarzynski-classical\n";  // beta missing
  }
  CHECK(run_cli("validate " + bad.string()) == 2);

  const auto good = std::filesystem::temp_directory_path() / "qwork_good.txt";
  {
    std::ofstream out(good);
    out << "experiment = exp-jarzynski-classical\nbeta = 1.0\n";
  }
  CHECK(run_cli("validate " + good.string()) == 0);
}

TEST_SUITE_END();
