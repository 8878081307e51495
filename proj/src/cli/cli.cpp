#include "chaincap/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "chaincap/assess.hpp"
#include "chaincap/bench.hpp"
#include "chaincap/chainsim.hpp"
#include "chaincap/errors.hpp"
#include "chaincap/report.hpp"
#include "chaincap/scenarios.hpp"

namespace chaincap::cli {
namespace {

namespace fs = std::filesystem;

// Desk-scale defaults; --paper restores 5 trials x 600 s.
constexpr double kDeskDuration = 60.0;
constexpr std::uint32_t kDeskTrials = 3;
constexpr double kPaperDuration = 600.0;
constexpr std::uint32_t kPaperTrials = 5;

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "chaincap-out";
}

std::string load_input(Context& ctx, const std::string& path, std::string_view what) {
  if (!fs::exists(path)) throw InputError(fmt::format("{} '{}' does not exist", what, path));
  auto text = read_file(path);
  ctx.manifest.inputs.push_back(FileDigest{path, sha256_hex(text)});
  return text;
}

ClusterConfig load_cluster(Context& ctx, const std::string& path) {
  if (path.empty()) return default_cluster();
  return parse_cluster_profile(load_input(ctx, path, "cluster file"));
}

Catalog load_catalog(Context& ctx, const std::string& path) {
  if (path.empty()) return builtin_scenarios();
  return load_scenarios(load_input(ctx, path, "scenario config"));
}

void finish(Context& ctx, OutputDir& dir) {
  ctx.manifest.ended_at = utc_now_iso8601();
  dir.finish(std::move(ctx.manifest));
}

ScenarioId require_scenario(const std::string& text) {
  if (const auto id = parse_scenario_id(text)) return *id;
  throw InputError(fmt::format("unknown scenario '{}'; did you mean '{}'?", text,
                               nearest_scenario_id(text)));
}

// ---- scenarios -------------------------------------------------------------

nlohmann::json scenario_json(const ScenarioSpec& s) {
  auto ucs = nlohmann::json::array();
  for (const auto& u : s.use_cases) {
    ucs.push_back({{"name", u.name},
                   {"reads_per_event", u.reads_per_event},
                   {"writes_per_event", u.writes_per_event},
                   {"write_payload_bytes", u.write_payload_bytes},
                   {"recorded", u.recorded},
                   {"trigger", u.trigger}});
  }
  return {{"id", std::string(to_string(s.id))},
          {"title", s.title},
          {"eta", s.eta ? nlohmann::json(s.eta->value()) : nlohmann::json(nullptr)},
          {"why", s.notes},
          {"use_cases", ucs}};
}

struct ScenariosFlags {
  std::string config;
  std::string id;
  bool json = false;
};

int cmd_scenarios_list(Context& ctx, const ScenariosFlags& f) {
  const auto catalog = load_catalog(ctx, f.config);
  if (f.json) {
    auto arr = nlohmann::json::array();
    for (const auto& s : catalog) arr.push_back(scenario_json(s));
    ctx.out << arr.dump(2) << "\n";
    return kExitOk;
  }
  ctx.out << "id,title,eta,use_cases,reads_per_event,writes_per_event\n";
  for (const auto& s : catalog) {
    std::uint32_t r = 0, w = 0;
    for (const auto& u : s.use_cases) {
      r += u.reads_per_event;
      w += u.writes_per_event;
    }
    ctx.out << fmt::format("{},\"{}\",{},{},{},{}\n", to_string(s.id), s.title,
                           s.eta ? fmt::format("{}", s.eta->value()) : std::string("unset"),
                           s.use_cases.size(), r, w);
  }
  return kExitOk;
}

int cmd_scenarios_show(Context& ctx, const ScenariosFlags& f) {
  const auto catalog = load_catalog(ctx, f.config);
  const auto& s = find_scenario(catalog, require_scenario(f.id));
  if (f.json) {
    ctx.out << scenario_json(s).dump(2) << "\n";
    return kExitOk;
  }
  ctx.out << fmt::format("{} ({})\n", s.title, to_string(s.id));
  ctx.out << fmt::format("eta: {}\n", s.eta ? fmt::format("{}", s.eta->value()) : "unset");
  ctx.out << fmt::format("why: {}\n", s.notes);
  for (const auto& u : s.use_cases) {
    ctx.out << fmt::format("use case {}: {} R, {} W per event, {} bytes per write\n", u.name,
                           u.reads_per_event, u.writes_per_event, u.write_payload_bytes);
    ctx.out << fmt::format("  what: {}\n  when: {}\n", u.recorded, u.trigger);
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateFlags {
  std::string cluster;
  std::string kind = "write";
  double lambda = 0.0;
  std::string arrival = "poisson";
  double duration = kDeskDuration;
  std::uint64_t seed = 1;
  std::string out;
  std::uint32_t nodes = 0;
  std::string read_mode;
  std::uint32_t payload = kDefaultWritePayloadBytes;
};

int cmd_simulate(Context& ctx, const SimulateFlags& f) {
  auto cluster = load_cluster(ctx, f.cluster);
  if (f.nodes != 0) {
    cluster.node_count = f.nodes;
    cluster.rtt_matrix_ms.clear();
  }
  if (!f.read_mode.empty()) cluster.read_mode = parse_read_mode(f.read_mode);
  cluster.validate();
  const auto kind = parse_tx_kind(f.kind);
  const auto arrival = parse_arrival_kind(f.arrival);
  ctx.manifest.seeds = {f.seed};

  const ArrivalProcess process{arrival, RatePerSecond(f.lambda), f.seed};
  const auto events = generate_events(process, kind, f.duration, f.payload, "simulate");
  const auto result = run(cluster, events, f.duration, f.seed);
  const auto summary = summarize(result.timeline, kind, f.lambda, kDefaultSteadyTolerance,
                                 kDefaultWarmupFraction);

  OutputDir dir(output_dir(f.out));
  dir.write("timeline.csv", timeline_csv(result.timeline));
  dir.write_json("summary.json",
                 {{"schema_version", kOutputSchemaVersion},
                  {"kind", f.kind},
                  {"arrival", f.arrival},
                  {"lambda", f.lambda},
                  {"duration_s", f.duration},
                  {"seed", f.seed},
                  {"node_count", cluster.node_count},
                  {"arrived_writes", result.totals.arrived_writes},
                  {"committed_writes", result.totals.committed_writes},
                  {"pending_writes", result.totals.pending_writes},
                  {"arrived_reads", result.totals.arrived_reads},
                  {"served_reads", result.totals.served_reads},
                  {"inflight_reads", result.totals.inflight_reads},
                  {"blocks", result.ledger.blocks_produced},
                  {"ledger_bytes", result.ledger.bytes()},
                  {"mean_tps", summary.mean_tps},
                  {"mean_latency_ms", summary.mean_latency_ms},
                  {"mean_cpu", summary.mean_cpu},
                  {"steady", f.lambda > 0.0 ? nlohmann::json(summary.steady) : nlohmann::json(nullptr)}});
  finish(ctx, dir);
  ctx.out << fmt::format("{} {} at {} tps for {} s: mean tps {:.2f}, latency {:.2f} ms, cpu {:.3f}\n",
                         f.arrival, f.kind, f.lambda, f.duration, summary.mean_tps,
                         summary.mean_latency_ms, summary.mean_cpu);
  return kExitOk;
}

// ---- capacity --------------------------------------------------------------

struct SearchFlags {
  std::string arrival = "poisson";
  double duration = kDeskDuration;
  std::uint64_t seed = 1;
  double tolerance = 0.01;
  double steady_tolerance = kDefaultSteadyTolerance;

  SearchOptions options() const {
    SearchOptions o;
    o.tolerance = tolerance;
    o.probe.duration_s = duration;
    o.probe.seed = seed;
    o.probe.steady_tolerance = steady_tolerance;
    return o;
  }
};

void add_search_flags(CLI::App* app, SearchFlags& f) {
  app->add_option("--arrival", f.arrival, "poisson|deterministic")->capture_default_str();
  app->add_option("--duration", f.duration, "seconds per probe")->capture_default_str();
  app->add_option("--seed", f.seed, "seed shared by every probe")->capture_default_str();
  app->add_option("--tolerance", f.tolerance, "relative search tolerance")->capture_default_str();
  app->add_option("--steady-tolerance", f.steady_tolerance, "steady-state tolerance")
      ->capture_default_str();
}

struct CapacityFlags {
  std::string cluster;
  std::string kind = "both";
  std::vector<std::uint32_t> nodes;
  std::string read_mode;
  std::string out;
  SearchFlags search;
};

int cmd_capacity(Context& ctx, const CapacityFlags& f) {
  auto base = load_cluster(ctx, f.cluster);
  if (!f.read_mode.empty()) base.read_mode = parse_read_mode(f.read_mode);
  for (const auto n : f.nodes) {
    if (n < 4) throw ConfigError(fmt::format("--nodes: BFT needs at least 4 nodes (got {})", n));
  }
  const auto arrival = parse_arrival_kind(f.search.arrival);
  const auto options = f.search.options();
  ctx.manifest.seeds = {f.search.seed};
  const auto counts = f.nodes.empty() ? std::vector<std::uint32_t>{base.node_count} : f.nodes;

  std::vector<CapacityProfile> profiles;
  if (f.kind == "both") {
    for (const auto n : counts) {
      auto cluster = base;
      if (n != base.node_count) cluster.rtt_matrix_ms.clear();
      cluster.node_count = n;
      profiles.push_back(find_capacity(cluster, arrival, options));
    }
  } else {
    profiles = sweep_nodes(base, counts, parse_tx_kind(f.kind), arrival, options);
  }

  OutputDir dir(output_dir(f.out));
  dir.write("capacity.csv", capacity_csv(profiles));
  auto arr = nlohmann::json::array();
  for (const auto& p : profiles) arr.push_back(to_json(p));
  dir.write_json("capacity.json", {{"schema_version", kOutputSchemaVersion},
                                   {"arrival", f.search.arrival},
                                   {"probe_duration_s", f.search.duration},
                                   {"profiles", arr}});
  // A single-profile run also yields a file that `assess --capacity` accepts.
  if (profiles.size() == 1 && profiles[0].max_lambda_read && profiles[0].max_lambda_write) {
    dir.write_json("capacity_profile.json", to_json(profiles[0]));
  }
  finish(ctx, dir);
  ctx.out << capacity_csv(profiles);
  return kExitOk;
}

// ---- campaign / figures ----------------------------------------------------

struct CampaignFlags {
  std::string cluster;
  std::string kind = "write";
  std::string arrival = "poisson";
  std::vector<double> rates;
  bool search = false;
  std::optional<std::uint32_t> trials;
  std::optional<double> duration;
  bool paper = false;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string read_mode;
  std::uint32_t nodes = 0;
  std::string out;
};

std::pair<std::uint32_t, double> trials_and_duration(bool paper, std::optional<std::uint32_t> trials,
                                                     std::optional<double> duration) {
  return {trials.value_or(paper ? kPaperTrials : kDeskTrials),
          duration.value_or(paper ? kPaperDuration : kDeskDuration)};
}

int cmd_campaign(Context& ctx, const CampaignFlags& f) {
  CampaignSpec spec;
  spec.cluster = load_cluster(ctx, f.cluster);
  if (f.nodes != 0) {
    spec.cluster.node_count = f.nodes;
    spec.cluster.rtt_matrix_ms.clear();
  }
  if (!f.read_mode.empty()) spec.cluster.read_mode = parse_read_mode(f.read_mode);
  spec.kind = parse_tx_kind(f.kind);
  spec.arrival = parse_arrival_kind(f.arrival);
  std::tie(spec.trials, spec.duration_s) = trials_and_duration(f.paper, f.trials, f.duration);
  spec.base_seed = f.seed;
  spec.rates = f.rates;
  if (f.search && !f.rates.empty()) throw InputError("--rates and --search are mutually exclusive");
  spec.validate();

  std::optional<double> found;
  if (f.search) {
    SearchOptions options;
    options.probe.duration_s = spec.duration_s;
    options.probe.seed = spec.base_seed;
    found = find_max_lambda(spec.cluster, spec.kind, spec.arrival, options).value();
    for (const double frac : {0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5}) spec.rates.push_back(frac * *found);
  }
  for (std::uint32_t i = 0; i < spec.trials; ++i) ctx.manifest.seeds.push_back(spec.base_seed + i);

  const auto result = run_campaign(spec, f.threads);
  for (const auto& w : result.warnings) ctx.err << "warning: " << w << "\n";

  OutputDir dir(output_dir(f.out));
  dir.write("trials.csv", trials_csv(result.trials));
  auto doc = campaign_json(spec, result);
  if (found) doc["search_max_lambda"] = *found;
  dir.write_json("aggregate.json", doc);
  finish(ctx, dir);
  ctx.out << figure_csv(result.aggregates);
  return kExitOk;
}

struct FiguresFlags {
  std::string cluster;
  std::optional<std::uint32_t> trials;
  std::optional<double> duration;
  bool paper = false;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
};

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> v;
  for (int k = 0;; ++k) {
    const double x = from + step * k;
    if (x > to + 1e-9) break;
    v.push_back(x);
  }
  return v;
}

int cmd_figures(Context& ctx, const FiguresFlags& f) {
  const auto base = load_cluster(ctx, f.cluster);
  const auto [trials, duration] = trials_and_duration(f.paper, f.trials, f.duration);
  for (std::uint32_t i = 0; i < trials; ++i) ctx.manifest.seeds.push_back(f.seed + i);

  struct Figure {
    std::string name;
    TxKind kind;
    ArrivalKind arrival;
    std::uint32_t nodes;
    ReadMode read_mode;
    std::vector<double> rates;
  };
  const auto write_rates = grid(200, 2800, 200);
  const std::vector<Figure> figures{
      {"write_4nodes.csv", TxKind::Write, ArrivalKind::Deterministic, 4, base.read_mode, write_rates},
      {"write_5nodes.csv", TxKind::Write, ArrivalKind::Deterministic, 5, base.read_mode, write_rates},
      {"write_6nodes.csv", TxKind::Write, ArrivalKind::Deterministic, 6, base.read_mode, write_rates},
      {"write_7nodes.csv", TxKind::Write, ArrivalKind::Deterministic, 7, base.read_mode, write_rates},
      {"read_single_4nodes.csv", TxKind::Read, ArrivalKind::Deterministic, 4,
       ReadMode::SingleNode, grid(500, 10000, 500)},
      {"read_multi_4nodes.csv", TxKind::Read, ArrivalKind::Deterministic, 4,
       ReadMode::MultiNode, grid(2000, 40000, 2000)},
      {"poisson_read_4nodes.csv", TxKind::Read, ArrivalKind::Poisson, 4,
       ReadMode::MultiNode, grid(2000, 30000, 2000)},
      {"poisson_write_4nodes.csv", TxKind::Write, ArrivalKind::Poisson, 4, base.read_mode,
       grid(200, 2400, 200)},
  };

  OutputDir dir(output_dir(f.out));
  for (const auto& fig : figures) {
    CampaignSpec spec;
    spec.cluster = base;
    if (fig.nodes != base.node_count) spec.cluster.rtt_matrix_ms.clear();
    spec.cluster.node_count = fig.nodes;
    spec.cluster.read_mode = fig.read_mode;
    spec.kind = fig.kind;
    spec.arrival = fig.arrival;
    spec.rates = fig.rates;
    spec.trials = trials;
    spec.duration_s = duration;
    spec.base_seed = f.seed;
    const auto result = run_campaign(spec, f.threads);
    dir.write(fig.name, figure_csv(result.aggregates));
    ctx.out << "wrote " << (dir.root() / fig.name).string() << "\n";
  }
  finish(ctx, dir);
  return kExitOk;
}

// ---- assess ----------------------------------------------------------------

struct AssessFlags {
  std::string scenario;
  std::optional<double> eta;
  std::string capacity;
  std::string cluster;
  std::string config;
  std::string out;
  SearchFlags search;
};

int cmd_assess(Context& ctx, const AssessFlags& f) {
  const auto catalog = load_catalog(ctx, f.config);
  const bool all = f.scenario == "all";
  if (all && f.eta) throw InputError("--eta applies to a single scenario, not 'all'");
  if (!f.capacity.empty() && !f.cluster.empty()) {
    throw InputError("--capacity and --cluster are mutually exclusive");
  }

  std::vector<const ScenarioSpec*> selected;
  if (all) {
    for (const auto& s : catalog) selected.push_back(&s);
  } else {
    selected.push_back(&find_scenario(catalog, require_scenario(f.scenario)));
  }
  // Fail on a missing eta before spending time on a capacity search.
  std::vector<std::string> skipped;
  if (!all && !f.eta && !selected.front()->eta) {
    throw InputError(fmt::format("eta required: scenario '{}' has no default; pass --eta",
                                 to_string(selected.front()->id)));
  }

  CapacityProfile capacity;
  if (!f.capacity.empty()) {
    const auto text = load_input(ctx, f.capacity, "capacity file");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(fmt::format("capacity file '{}': {}", f.capacity, e.what()));
    }
    capacity = capacity_from_json(doc);
  } else {
    const auto cluster = load_cluster(ctx, f.cluster);
    ctx.manifest.seeds = {f.search.seed};
    capacity = find_capacity(cluster, parse_arrival_kind(f.search.arrival), f.search.options());
  }

  std::vector<MethodologyReport> reports;
  for (const auto* s : selected) {
    if (all && !s->eta) {
      skipped.emplace_back(to_string(s->id));
      continue;
    }
    reports.push_back(methodology_report(*s, f.eta, capacity));
  }

  auto docs = nlohmann::json::array();
  std::vector<Verdict> verdicts;
  std::string text;
  for (const auto& r : reports) {
    docs.push_back(r.to_json());
    verdicts.insert(verdicts.end(), r.verdicts.begin(), r.verdicts.end());
    text += r.to_text() + "\n";
  }
  auto skipped_json = nlohmann::json::array();
  for (const auto& s : skipped) {
    skipped_json.push_back({{"scenario", s}, {"reason", "eta required"}});
    ctx.err << fmt::format("warning: skipped '{}': eta required (set it in --config)\n", s);
  }

  OutputDir dir(output_dir(f.out));
  dir.write_json("verdicts.json", {{"schema_version", kOutputSchemaVersion},
                                   {"capacity", to_json(capacity)},
                                   {"reports", docs},
                                   {"skipped", skipped_json}});
  dir.write("summary.csv", verdict_summary_csv(verdicts));
  dir.write("report.txt", text);
  finish(ctx, dir);
  ctx.out << text;
  return kExitOk;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateFlags {
  std::string cluster;
  double target_write = 1400.0;
  double target_read = 20500.0;
  double accuracy = 0.01;
  std::string out;
  SearchFlags search;
};

// Scales one cost coefficient until the measured capacity lands within
// `accuracy` of the target. Capacity falls as the cost rises.
double tune(ClusterConfig& cluster, double ClusterConfig::*cost, TxKind kind, double target,
            double accuracy, const SearchOptions& options, ArrivalKind arrival, std::ostream& log) {
  for (int iter = 0; iter < 25; ++iter) {
    const double found = find_max_lambda(cluster, kind, arrival, options).value();
    log << fmt::format("  {} cost {:.4f} us -> {:.1f} tps\n", to_string(kind), cluster.*cost, found);
    const double ratio = found / target;
    if (std::abs(ratio - 1.0) <= accuracy) return found;
    cluster.*cost *= std::pow(ratio, 0.8);
  }
  throw CalibrationError(fmt::format("calibration for {} did not converge", to_string(kind)));
}

int cmd_calibrate(Context& ctx, const CalibrateFlags& f) {
  auto cluster = load_cluster(ctx, f.cluster);
  const auto arrival = parse_arrival_kind(f.search.arrival);
  const auto options = f.search.options();
  ctx.manifest.seeds = {f.search.seed};
  const double w = tune(cluster, &ClusterConfig::write_exec_us, TxKind::Write, f.target_write,
                        f.accuracy, options, arrival, ctx.out);
  const double r = tune(cluster, &ClusterConfig::read_service_us, TxKind::Read, f.target_read,
                        f.accuracy, options, arrival, ctx.out);
  OutputDir dir(output_dir(f.out));
  dir.write("cluster_profile.ini", serialize_cluster_profile(cluster));
  finish(ctx, dir);
  ctx.out << fmt::format("calibrated: write capacity {:.1f} tps, read capacity {:.1f} tps\n", w, r);
  return kExitOk;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ConflictError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const InputError*>(&e)) {
    return kExitUsage;
  }
  return kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{args, out, err, {}};
  ctx.manifest.command_line.push_back("chaincap");
  ctx.manifest.command_line.insert(ctx.manifest.command_line.end(), args.begin(), args.end());
  ctx.manifest.started_at = utc_now_iso8601();

  CLI::App app{"Blockchain capacity assessment for 6G scenario workloads", "chaincap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // scenarios
  ScenariosFlags sf;
  auto* scenarios = app.add_subcommand("scenarios", "Inspect the scenario catalog");
  scenarios->require_subcommand(1);
  scenarios->add_option("--config", sf.config, "scenario override file");
  scenarios->add_flag("--json", sf.json, "print JSON instead of text");
  auto* list = scenarios->add_subcommand("list", "List all scenarios");
  auto* show = scenarios->add_subcommand("show", "Show one scenario");
  show->add_option("id", sf.id, "scenario id")->required();

  SimulateFlags simf;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation and export its timeline");
  simulate->add_option("--cluster", simf.cluster, "cluster profile (default: built-in)");
  simulate->add_option("--kind", simf.kind, "read|write")->capture_default_str();
  simulate->add_option("--lambda", simf.lambda, "offered rate (tx/s)")->required();
  simulate->add_option("--arrival", simf.arrival, "poisson|deterministic")->capture_default_str();
  simulate->add_option("--duration", simf.duration, "seconds")->capture_default_str();
  simulate->add_option("--seed", simf.seed, "arrival seed")->capture_default_str();
  simulate->add_option("--nodes", simf.nodes, "override node count");
  simulate->add_option("--read-mode", simf.read_mode, "single|multi|random");
  simulate->add_option("--payload", simf.payload, "bytes per transaction")->capture_default_str();
  simulate->add_option("--out", simf.out, "output directory");

  CapacityFlags capf;
  auto* capacity = app.add_subcommand("capacity", "Search the maximum sustainable rates");
  capacity->add_option("--cluster", capf.cluster, "cluster profile (default: built-in)");
  capacity->add_option("--kind", capf.kind, "read|write|both")->capture_default_str();
  capacity->add_option("--nodes", capf.nodes, "node counts, e.g. 4,5,6,7")->delimiter(',');
  capacity->add_option("--read-mode", capf.read_mode, "single|multi|random");
  capacity->add_option("--out", capf.out, "output directory");
  add_search_flags(capacity, capf.search);

  CampaignFlags camf;
  auto* campaign = app.add_subcommand("campaign", "Repeated trials over a list of rates");
  campaign->add_option("--cluster", camf.cluster, "cluster profile (default: built-in)");
  campaign->add_option("--kind", camf.kind, "read|write")->capture_default_str();
  campaign->add_option("--arrival", camf.arrival, "poisson|deterministic")->capture_default_str();
  campaign->add_option("--rates", camf.rates, "offered rates, comma separated")->delimiter(',');
  campaign->add_flag("--search", camf.search, "find the maximum rate first and probe around it");
  campaign->add_option("--trials", camf.trials, "trials per rate (default 3, --paper 5)");
  campaign->add_option("--duration", camf.duration, "seconds per trial (default 60, --paper 600)");
  campaign->add_flag("--paper", camf.paper, "5 trials x 600 s");
  campaign->add_option("--seed", camf.seed, "base seed; trial i uses seed+i")->capture_default_str();
  campaign->add_option("--threads", camf.threads, "worker threads (0 = all cores)");
  campaign->add_option("--nodes", camf.nodes, "override node count");
  campaign->add_option("--read-mode", camf.read_mode, "single|multi|random");
  campaign->add_option("--out", camf.out, "output directory");

  FiguresFlags figf;
  auto* figures = app.add_subcommand("figures", "Write plot-data CSVs for every figure");
  figures->add_option("--cluster", figf.cluster, "cluster profile (default: built-in)");
  figures->add_option("--trials", figf.trials, "trials per rate (default 3, --paper 5)");
  figures->add_option("--duration", figf.duration, "seconds per trial (default 60, --paper 600)");
  figures->add_flag("--paper", figf.paper, "5 trials x 600 s");
  figures->add_option("--seed", figf.seed, "base seed")->capture_default_str();
  figures->add_option("--threads", figf.threads, "worker threads (0 = all cores)");
  figures->add_option("--out", figf.out, "output directory");

  AssessFlags asf;
  auto* assess_cmd = app.add_subcommand("assess", "Suitability verdicts for scenarios");
  assess_cmd->add_option("--scenario", asf.scenario, "scenario id or 'all'")->required();
  assess_cmd->add_option("--eta", asf.eta, "concurrent events per second");
  assess_cmd->add_option("--capacity", asf.capacity, "capacity JSON file (e.g. profiles/paper.json)");
  assess_cmd->add_option("--cluster", asf.cluster, "simulate this cluster profile for capacity");
  assess_cmd->add_option("--config", asf.config, "scenario override file");
  assess_cmd->add_option("--out", asf.out, "output directory");
  add_search_flags(assess_cmd, asf.search);

  CalibrateFlags calf;
  auto* calibrate = app.add_subcommand("calibrate", "Tune cost coefficients to capacity targets");
  calibrate->add_option("--cluster", calf.cluster, "starting profile (default: built-in)");
  calibrate->add_option("--target-write", calf.target_write, "write capacity target")->capture_default_str();
  calibrate->add_option("--target-read", calf.target_read, "read capacity target")->capture_default_str();
  calibrate->add_option("--accuracy", calf.accuracy, "relative accuracy")->capture_default_str();
  calibrate->add_option("--out", calf.out, "output directory");
  add_search_flags(calibrate, calf.search);

  std::vector<const char*> argv{"chaincap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_scenarios_list(ctx, sf);
    if (show->parsed()) return cmd_scenarios_show(ctx, sf);
    if (simulate->parsed()) return cmd_simulate(ctx, simf);
    if (capacity->parsed()) return cmd_capacity(ctx, capf);
    if (campaign->parsed()) return cmd_campaign(ctx, camf);
    if (figures->parsed()) return cmd_figures(ctx, figf);
    if (assess_cmd->parsed()) return cmd_assess(ctx, asf);
    if (calibrate->parsed()) return cmd_calibrate(ctx, calf);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace chaincap::cli
