#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "qwork/experiments.hpp"

// qwork-lab: experiment runner.
//   qwork-lab list
//   qwork-lab validate <config-file>
//   qwork-lab <experiment> [--config file] [--out dir] [--key value]...
// Exit codes: 0 checks passed, 1 checks failed, 2 configuration error.
namespace {

namespace exps = qwork::experiments;

void print_usage() {
  std::printf(
      "usage:\n"
      "  qwork-lab list\n"
      "  qwork-lab validate <config-file>\n"
      "  qwork-lab <experiment> [--config file] [--out dir] [--key value]...\n"
      "\nDefault output root: $%s or ./qwork-runs\n",
      exps::kOutRootEnv);
}

int cmd_list() {
  std::printf("%zu experiments:\n\n", exps::registry().size());
  for (const auto& e : exps::registry()) {
    std::printf("%s\n  %s\n  parameters:\n", e.name.c_str(),
                e.description.c_str());
    for (const auto& p : e.params) {
      if (p.required)
        std::printf("    --%-16s %s (required)\n", p.key.c_str(),
                    p.description.c_str());
      else
        std::printf("    --%-16s %s (default %g)\n", p.key.c_str(),
                    p.description.c_str(), p.default_value);
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  exps::ExperimentConfig config;
  try {
    config = exps::parse_config_file(path);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  const auto diags = exps::validate(config);
  if (diags.empty()) {
    std::printf("valid: %s\n", config.experiment.c_str());
    return 0;
  }
  for (const auto& d : diags) std::fprintf(stderr, "diagnostic: %s\n", d.c_str());
  return 2;
}

int cmd_run(const std::string& name, const std::vector<std::string>& args) {
  exps::ExperimentConfig config;
  config.experiment = name;

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0) {
      std::fprintf(stderr, "error: expected --key value, got '%s'\n",
                   arg.c_str());
      return 2;
    }
    std::string key = arg.substr(2);
    for (char& c : key)
      if (c == '-') c = '_';  // --eps-prime and --eps_prime both work
    if (i + 1 >= args.size()) {
      std::fprintf(stderr, "error: missing value for --%s\n", key.c_str());
      return 2;
    }
    const std::string value = args[++i];
    if (key == "config") {
      try {
        exps::ExperimentConfig from_file = exps::parse_config_file(value);
        if (!from_file.experiment.empty() && from_file.experiment != name) {
          std::fprintf(stderr,
                       "error: config file is for '%s', command line says '%s'\n",
                       from_file.experiment.c_str(), name.c_str());
          return 2;
        }
        // File values fill in; command-line overrides win.
        for (auto& [k, v] : from_file.values) config.values.emplace(k, v);
        if (config.out_dir.empty()) config.out_dir = from_file.out_dir;
      } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
      }
    } else if (key == "out") {
      config.out_dir = value;
    } else {
      config.values[key] = value;  // command-line overrides file values
    }
  }

  const auto diags = exps::validate(config);
  if (!diags.empty()) {
    for (const auto& d : diags)
      std::fprintf(stderr, "diagnostic: %s\n", d.c_str());
    return 2;
  }

  try {
    const exps::ResolvedConfig resolved = exps::resolve(config);
    const exps::Outcome outcome = exps::run(resolved);
    const std::string dir = exps::write_outputs(resolved, outcome);
    for (const auto& note : outcome.notes)
      std::printf("note: %s\n", note.c_str());
    std::printf("%s: %s (outputs in %s)\n", name.c_str(),
                outcome.passed ? "PASS" : "FAIL", dir.c_str());
    return outcome.passed ? 0 : 1;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "configuration error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "runtime failure: %s\n", err.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage();
    return 2;
  }
  const std::string command = argv[1];
  if (command == "list") return cmd_list();
  if (command == "help" || command == "--help" || command == "-h") {
    print_usage();
    return 0;
  }
  if (command == "validate") {
    if (argc != 3) {
      std::fprintf(stderr, "error: validate needs a config file\n");
      return 2;
    }
    return cmd_validate(argv[2]);
  }
  if (!qwork::experiments::find(command)) {
    std::fprintf(stderr, "error: unknown experiment '%s' (try: qwork-lab list)\n",
                 command.c_str());
    return 2;
  }
  std::vector<std::string> args(argv + 2, argv + argc);
  return cmd_run(command, args);
}
