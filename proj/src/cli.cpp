#include "prwf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prwf/config.hpp"
#include "prwf/csv.hpp"
#include "prwf/diagnostics.hpp"
#include "prwf/errors.hpp"
#include "prwf/harness.hpp"
#include "prwf/kernels.hpp"

namespace prwf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
  std::string subcommand;
  std::optional<fs::path> config_path;
  std::vector<std::string> overrides;
  fs::path out_dir = "prwf_out";
  int threads = 0;
};

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
}

template <class F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json trial_json(const TrialOutcome& t) {
  json j = {{"trial", t.trial},
            {"seed", t.seed},
            {"m", t.m},
            {"n", t.n},
            {"final_relerr", optional_json(t.final_relerr)},
            {"success", t.success},
            {"iters", t.iters},
            {"wall_ms", t.wall_ms},
            {"init_relerr", optional_json(t.init_relerr)},
            {"gamma", t.gamma},
            {"top_eigenvalue", t.top_eigenvalue},
            {"power_iters", t.power_iters}};
  if (t.admissibility) {
    const AdmissibilityReport& a = *t.admissibility;
    j["noise_admissibility"] = {{"sum_abs", a.sum_abs},   {"l2_ratio", a.l2_ratio},
                                {"inf_ratio", a.inf_ratio}, {"sum_flag", a.sum_flag},
                                {"l2_flag", a.l2_flag},   {"inf_flag", a.inf_flag}};
  }
  if (t.error) j["error"] = *t.error;
  return j;
}

std::string trace_comment(const std::string& resolved, const TrialOutcome& t) {
  return resolved + " trial=" + std::to_string(t.trial) + " trial_seed=" + std::to_string(t.seed);
}

int cmd_run(const ExperimentConfig& cfg, const Invocation& inv, std::ostream& err) {
  const std::string resolved = cfg.describe();
  RunOptions opts{inv.threads, inv.out_dir};
  std::vector<TrialOutcome> trials;
  ConvergenceSummary summary;
  if (cfg.instance_file) {
    trials.push_back(run_stored_instance(cfg));
    summary = summarize(trials);
  } else {
    ConvergenceResult r = run_convergence(cfg, opts);
    trials = std::move(r.trials);
    summary = r.summary;
  }

  for (const auto& t : trials) {
    if (t.error) err << "trial " << t.trial << ": " << *t.error << '\n';
    if (!cfg.traces) continue;
    write_file(inv.out_dir / ("trace_" + std::to_string(t.trial) + ".csv"),
               [&](std::ostream& os) { write_trace_csv(os, t.trace, trace_comment(resolved, t)); });
  }
  write_file(inv.out_dir / "trials.csv",
             [&](std::ostream& os) { write_trials_csv(os, trials, resolved); });

  json j;
  j["config"] = resolved;
  j["master_seed"] = cfg.master_seed;
  j["algorithm"] = std::string(to_string(cfg.algorithm()));
  j["summary"] = {{"median_final_relerr", optional_json(summary.median_final_relerr)},
                  {"min_final_relerr", optional_json(summary.min_final_relerr)},
                  {"max_final_relerr", optional_json(summary.max_final_relerr)},
                  {"failed_trials", summary.failed_trials}};
  j["trials"] = json::array();
  for (const auto& t : trials) j["trials"].push_back(trial_json(t));
  write_file(inv.out_dir / "summary.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const Invocation& inv) {
  if (cfg.instance_file) throw ConfigError("instance_file", "not supported by sweep");
  const std::string resolved = cfg.describe();
  const SweepResult r = run_success_sweep(cfg, RunOptions{inv.threads, inv.out_dir});
  write_file(inv.out_dir / "sweep.csv",
             [&](std::ostream& os) { write_sweep_csv(os, r, resolved); });
  write_file(inv.out_dir / "trials.csv",
             [&](std::ostream& os) { write_trials_csv(os, r.trials, resolved); });
  return kExitOk;
}

int cmd_init(const ExperimentConfig& cfg, const Invocation& inv, std::ostream& err) {
  const std::string resolved = cfg.describe();
  std::vector<TrialOutcome> trials;
  if (cfg.instance_file)
    trials.push_back(run_stored_instance(cfg, /*init_only=*/true));
  else
    trials = run_init_study(cfg, RunOptions{inv.threads, inv.out_dir});
  for (const auto& t : trials) {
    if (t.error) err << "trial " << t.trial << ": " << *t.error << '\n';
    if (t.negative_dominant.value_or(false))
      err << "trial " << t.trial
          << ": the most negative eigenvalue of M dominates in magnitude\n";
  }
  write_file(inv.out_dir / "init.csv",
             [&](std::ostream& os) { write_init_csv(os, trials, resolved); });
  return kExitOk;
}

void write_verify(std::ostream& os, const std::vector<ExpectationReport>& reports,
                  std::uint64_t seed) {
  os << "# verify seed=" << seed << '\n';
  os << "check_name,samples,deviation,tolerance,pass\n";
  for (const auto& r : reports)
    os << r.target << ',' << r.samples << ',' << format_double(r.deviation) << ','
       << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
}

int cmd_verify(std::uint64_t seed, const Invocation& inv, std::ostream& out) {
  const std::vector<ExpectationReport> reports = standard_checks(seed);
  write_verify(out, reports, seed);
  write_file(inv.out_dir / "verify.csv",
             [&](std::ostream& os) { write_verify(os, reports, seed); });
  for (const auto& r : reports)
    if (!r.pass) return kExitCheckFailed;
  return kExitOk;
}

int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err) {
  std::vector<Override> overrides;
  for (const auto& s : inv.overrides) overrides.push_back(parse_override(s));

  if (inv.subcommand == "verify") {
    const std::uint64_t seed = parse_seed_only(inv.config_path, overrides);
    prepare_out_dir(inv.out_dir);
    return cmd_verify(seed, inv, out);
  }

  if (!inv.config_path) throw ConfigError("config", "--config is required for " + inv.subcommand);
  const ExperimentConfig cfg = parse_config(*inv.config_path, overrides);
  prepare_out_dir(inv.out_dir);
  if (inv.subcommand == "run") return cmd_run(cfg, inv, err);
  if (inv.subcommand == "sweep") return cmd_sweep(cfg, inv);
  return cmd_init(cfg, inv, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wirtinger flow phase retrieval experiments"};
  app.require_subcommand(1);
  Invocation inv;

  for (const char* name : {"run", "sweep", "init", "verify"}) {
    std::string desc = std::string(name) == "run"      ? "Convergence traces for a single m"
                       : std::string(name) == "sweep"  ? "Success rate over a list of m/n"
                       : std::string(name) == "init"   ? "Spectral initialization quality"
                                                       : "Monte-Carlo checks of the model";
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", inv.config_path, "Configuration file (key = value lines)");
    sub->add_option("--set", inv.overrides, "Override a configuration key (key=value)")
        ->allow_extra_args(false);
    sub->add_option("--out", inv.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", inv.threads, "Worker threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    sub->callback([&inv, sub] { inv.subcommand = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    kernels::set_num_threads(inv.threads);
    return dispatch(inv, out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace prwf
