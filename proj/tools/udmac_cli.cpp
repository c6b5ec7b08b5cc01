// udmac: experiment driver.
//
//   udmac <command> [--preset NAME] [--config FILE] [--set sec.key=val]... [--out DIR]
//
// exit codes: 0 ok, 1 bad input/config, 2 solver did not converge, 3 I/O.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "udmac/errors.hpp"
#include "udmac/harness/commands.hpp"
#include "udmac/version.hpp"

namespace {

using namespace udmac;

struct CommonArgs {
  std::string preset = "paper-2023";
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::uint64_t> seeds;
  std::vector<int> dims;
  std::vector<std::string> protocols;
  std::string out;
  int jobs = 0;
  std::string kernel = "auto";
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--preset", a.preset, "starting configuration")->capture_default_str();
  sub->add_option("--config", a.config, "INI file applied on top of the preset")->check(CLI::ExistingFile);
  sub->add_option("--set", a.sets, "override, e.g. --set mac.uavs=50 (repeatable)");
  sub->add_option("--seed", a.seeds, "seed(s), replaces sweep.seeds");
  sub->add_option("--dim", a.dims, "dimension(s) 1, 2 or 3, replaces sweep.dims");
  sub->add_option("--protocol", a.protocols, "udmac and/or vemac, replaces sweep.protocols");
  sub->add_option("--out", a.out, "output directory (default $UDMAC_OUT_DIR or ./results)");
  sub->add_option("--jobs,-j", a.jobs, "worker threads (0: hardware concurrency)");
  sub->add_option("--kernel", a.kernel, "Monte-Carlo kernel")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
  return s;
}

template <class T>
std::string join_numbers(const std::vector<T>& v) {
  std::vector<std::string> parts;
  for (auto x : v) parts.push_back(std::to_string(x));
  return join(parts);
}

harness::ExperimentConfig build_config(const CommonArgs& a) {
  auto cfg = harness::preset(a.preset);
  if (!a.config.empty()) harness::apply_ini_file(cfg, a.config);
  for (const auto& s : a.sets) harness::apply_override(cfg, s);
  if (!a.seeds.empty()) harness::set_value(cfg, "sweep", "seeds", join_numbers(a.seeds));
  if (!a.dims.empty()) harness::set_value(cfg, "sweep", "dims", join_numbers(a.dims));
  if (!a.protocols.empty()) harness::set_value(cfg, "sweep", "protocols", join(a.protocols));
  return cfg;
}

harness::RunOptions run_options(const CommonArgs& a) {
  harness::RunOptions o;
  o.jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (a.kernel == "scalar") o.kernel = simd::KernelPreference::Scalar;
  if (a.kernel == "avx2") o.kernel = simd::KernelPreference::Avx2;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV MAC experiment driver"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs args;
  bool print_config = false;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  const std::vector<std::pair<std::string, std::string>> described = {
      {"validate-prob", "closed-form SCF probability against Monte-Carlo"},
      {"throughput", "analytic and simulated saturation throughput vs waiting time"},
      {"freeze-tradeoff", "SCF/MH throughput split vs freeze duration"},
      {"sim", "single simulator run per protocol and seed"},
      {"compare", "UD-MAC vs VeMAC over the sweep"},
  };
  for (const auto& [name, help] : described) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, args);
    sub->add_flag("--print-config", print_config, "print the resolved configuration and exit");
    subs.emplace_back(name, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // --help/--version are successes
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  try {
    const auto cfg = build_config(args);
    if (print_config) {
      std::cout << harness::to_ini(cfg);
      return 0;
    }
    const auto opts = run_options(args);
    const auto out = harness::run_command(command, cfg, opts);
    const auto dir = harness::resolve_out_dir(args.out.empty() ? std::nullopt : std::optional(args.out));
    const auto files = harness::write_outputs(out, cfg, opts, dir);
    for (const auto& line : out.summary) std::cout << line << '\n';
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    return 0;
  } catch (const ConvergenceError& e) {
    std::cerr << "udmac: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "udmac: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "udmac: " << e.what() << '\n';
    return 1;
  }
}
