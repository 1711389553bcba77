#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pairstat/bootstrap.hpp"
#include "pairstat/characterization.hpp"
#include "pairstat/click_records.hpp"
#include "pairstat/curves.hpp"
#include "pairstat/error.hpp"
#include "pairstat/monte_carlo.hpp"
#include "pairstat/report.hpp"
#include "pairstat/setup_file.hpp"
#include "pairstat/timetags.hpp"

namespace {

using namespace pairstat;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidArgument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Setup file plus per-field flag overrides; flags win.
struct SetupFlags {
  std::string file;
  SetupConfig flags;

  void attach(CLI::App& cmd, const std::string& file_option, bool with_etas) {
    cmd.add_option(file_option, file, "Key-value setup file");
    if (with_etas) {
      cmd.add_option("--eta-h", flags.eta_h, "Herald channel transmission");
      cmd.add_option("--eta-a", flags.eta_a, "Channel A transmission");
      cmd.add_option("--eta-b", flags.eta_b, "Channel B transmission");
      cmd.add_option("--c", flags.c, "Pair correlation factor in (0,1]");
    }
    cmd.add_option("--d-h", flags.d_h, "Dark-count probability of H");
    cmd.add_option("--d-a", flags.d_a, "Dark-count probability of A");
    cmd.add_option("--d-b", flags.d_b, "Dark-count probability of B");
  }

  SetupConfig resolve() const {
    SetupConfig cfg = file.empty() ? SetupConfig{} : read_setup_config(file);
    cfg.apply(flags);
    return cfg;
  }
};

void echo_setup(RunReport& report, const SetupConfig& cfg) {
  auto put = [&report](const char* key, const std::optional<double>& v) {
    if (v) report.settings[key] = *v;
  };
  put("eta_h", cfg.eta_h);
  put("eta_a", cfg.eta_a);
  put("eta_b", cfg.eta_b);
  put("c", cfg.c);
  const DarkCountRates d = cfg.darks();
  report.settings["d_h"] = d.d_h();
  report.settings["d_a"] = d.d_a();
  report.settings["d_b"] = d.d_b();
}

struct WindowFlags {
  std::int64_t period_ps = 200'000;
  std::int64_t width_ps = 5'000;
  std::int64_t offset_ps = 0;
  std::int64_t dead_a_ps = 0;
  std::int64_t dead_b_ps = 0;
  std::int64_t dead_h_ps = 0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--period-ps", period_ps, "Clock period")
        ->capture_default_str();
    cmd.add_option("--width-ps", width_ps, "Acceptance window width")
        ->capture_default_str();
    cmd.add_option("--offset-ps", offset_ps,
                   "Window centre relative to the clock tag")
        ->capture_default_str();
    cmd.add_option("--dead-a-ps", dead_a_ps, "Dead time of A (0 = ungated)");
    cmd.add_option("--dead-b-ps", dead_b_ps, "Dead time of B (0 = ungated)");
    cmd.add_option("--dead-h-ps", dead_h_ps, "Dead time of H (0 = ungated)");
  }

  WindowSpec window() const {
    WindowSpec w{period_ps, width_ps, offset_ps};
    w.validate();
    return w;
  }
  DeadTimes dead() const {
    if (dead_a_ps < 0 || dead_b_ps < 0 || dead_h_ps < 0) {
      throw InvalidArgument("dead times must be >= 0");
    }
    return {dead_a_ps, dead_b_ps, dead_h_ps};
  }

  void echo(RunReport& report) const {
    report.settings["period_ps"] = period_ps;
    report.settings["width_ps"] = width_ps;
    report.settings["offset_ps"] = offset_ps;
    report.settings["dead_a_ps"] = dead_a_ps;
    report.settings["dead_b_ps"] = dead_b_ps;
    report.settings["dead_h_ps"] = dead_h_ps;
  }
};

void add_dist_option(CLI::App& cmd, std::string& dist) {
  cmd.add_option("--dist", dist, "Pair-number distribution")
      ->check(CLI::IsMember({"poisson", "thermal"}, CLI::ignore_case))
      ->capture_default_str();
}

Spacing parse_spacing(const std::string& s) {
  return s == "linear" ? Spacing::linear : Spacing::log;
}

// --- characterize -----------------------------------------------------------

struct CharacterizeArgs {
  std::string input;
  std::string format = "clicks";
  WindowFlags window;
  SetupFlags darks;
  std::string dist = "poisson";
  std::size_t resamples = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool strict = false;
  std::vector<double> ph;
  std::optional<double> bound_eta_h, bound_eta_a, bound_eta_b;
  std::string output;
};

void run_characterize(const CharacterizeArgs& args, RunReport& report) {
  const PairDistributionKind kind = parse_distribution_kind(args.dist);
  const SetupConfig cfg = args.darks.resolve();
  const DarkCountRates darks = cfg.darks();

  report.settings["input"] = args.input;
  report.settings["format"] = args.format;
  report.settings["dist"] = std::string(to_string(kind));
  report.settings["resamples"] = static_cast<std::int64_t>(args.resamples);
  report.settings["seed"] = static_cast<std::int64_t>(args.seed);
  report.settings["strict"] = args.strict;
  echo_setup(report, cfg);

  ClickCounts counts;
  if (args.format == "timetags") {
    args.window.echo(report);
    const TimetagIngestResult ingest = ingest_timetags(
        args.input, args.window.window(), args.window.dead());
    counts = ingest.counts;
    report.ingest = IngestSummary{ingest.total_periods,
                                  ingest.discarded_windows,
                                  ingest.multi_tag_windows};
    if (ingest.multi_tag_windows > 0) {
      report.warnings.push_back(
          std::to_string(ingest.multi_tag_windows) +
          " windows had several tags on one channel; each counted as one "
          "click");
    }
  } else {
    counts = read_click_records(args.input);
  }
  report.counts = counts;

  const MeasuredProbabilities m = estimate_probabilities(counts);
  report.measured = m;

  BootstrapOptions boot;
  boot.n_resamples = args.resamples;
  boot.seed = args.seed;
  boot.threads = args.threads;
  boot.solve.strict = args.strict;
  const CharacterizedSource source =
      propagate_uncertainty(counts, darks, kind, boot);
  report.source = source;
  report.warnings.insert(report.warnings.end(), source.warnings.begin(),
                         source.warnings.end());

  if (m.p_a > 0.0 && m.p_h > 0.0) {
    const auto g_of = [](const ClickCounts& c)
        -> std::optional<std::vector<double>> {
      const MeasuredProbabilities r = estimate_probabilities(c);
      if (r.p_a == 0.0 || r.p_h == 0.0) return std::nullopt;
      return std::vector<double>{r.p_ah / (r.p_a * r.p_h)};
    };
    const BootstrapSummary s = bootstrap_standard_errors(
        counts, args.resamples, args.seed, g_of, args.threads);
    report.correlation_strength =
        Estimate{m.p_ah / (m.p_a * m.p_h), s.std_errors.at(0)};
  }

  if (args.bound_eta_h || args.bound_eta_a) {
    if (!args.bound_eta_h || !args.bound_eta_a) {
      throw InvalidArgument("--bound-eta-h and --bound-eta-a go together");
    }
    if (!report.correlation_strength) {
      throw NumericalError("G undefined: no A or no H clicks");
    }
    report.settings["bound_eta_h"] = *args.bound_eta_h;
    report.settings["bound_eta_a"] = *args.bound_eta_a;
    const ChannelTransmissions assumed(
        *args.bound_eta_h, *args.bound_eta_a,
        args.bound_eta_b.value_or(*args.bound_eta_a));
    BrightnessBound bound = brightness_upper_bound(
        report.correlation_strength->value, assumed, darks, kind);
    report.warnings.insert(report.warnings.end(), bound.warnings.begin(),
                           bound.warnings.end());
    report.bound = std::move(bound);
  }

  const SetupModel model(source.transmissions(), darks);
  const std::vector<double> targets =
      args.ph.empty() ? std::vector<double>{m.p_h} : args.ph;
  for (double ph : targets) {
    report.predictions.push_back(predict_at_heralding(model, kind, ph));
  }
}

// --- bound-mu ---------------------------------------------------------------

struct BoundArgs {
  double g = 0.0;
  double eta_h = 0.0;
  double eta_a = 0.0;
  std::optional<double> eta_b;
  SetupFlags darks;
  std::string dist = "poisson";
  std::string output;
};

void run_bound(const BoundArgs& args, RunReport& report) {
  const PairDistributionKind kind = parse_distribution_kind(args.dist);
  const SetupConfig cfg = args.darks.resolve();
  report.settings["g"] = args.g;
  report.settings["eta_h"] = args.eta_h;
  report.settings["eta_a"] = args.eta_a;
  report.settings["eta_b"] = args.eta_b.value_or(args.eta_a);
  report.settings["dist"] = std::string(to_string(kind));
  echo_setup(report, cfg);

  const ChannelTransmissions assumed(args.eta_h, args.eta_a,
                                     args.eta_b.value_or(args.eta_a));
  BrightnessBound bound =
      brightness_upper_bound(args.g, assumed, cfg.darks(), kind);
  report.warnings = bound.warnings;
  report.bound = std::move(bound);
}

// --- g-curve / g2-curve -----------------------------------------------------

struct GCurveArgs {
  SetupFlags setup;
  std::string dist = "poisson";
  double mu_min = 1e-6;
  double mu_max = 1.0;
  std::size_t points = 200;
  std::string spacing = "log";
  std::string output;
};

void run_g_curve(const GCurveArgs& args) {
  const SetupModel model = args.setup.resolve().model();
  const auto mus = sample_range(args.mu_min, args.mu_max, args.points,
                                parse_spacing(args.spacing));
  const auto curve =
      g_curve(model, parse_distribution_kind(args.dist), mus);
  Output out(args.output);
  write_g_curve_csv(out.stream(), curve);
}

struct G2CurveArgs {
  SetupFlags setup;
  double ph_min = 1e-5;
  double ph_max = 0.05;
  std::size_t points = 100;
  std::string spacing = "log";
  bool thermal = false;
  std::string output;
};

void run_g2_curve(const G2CurveArgs& args) {
  const SetupModel model = args.setup.resolve().model();
  const auto phs = sample_range(args.ph_min, args.ph_max, args.points,
                                parse_spacing(args.spacing));
  const auto kind = args.thermal ? PairDistributionKind::thermal
                                 : PairDistributionKind::poisson;
  const auto curve = g2_curve(model, kind, phs);
  Output out(args.output);
  write_g2_curve_csv(out.stream(), curve);
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  SetupFlags setup;
  std::string dist = "poisson";
  double mu = 0.0;
  std::uint64_t windows = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> max_pairs;
  bool emit_timetags = false;
  WindowFlags window;
  std::string output;
};

void run_simulate(const SimulateArgs& args) {
  const SetupModel model = args.setup.resolve().model();
  const PairDistribution dist(parse_distribution_kind(args.dist), args.mu);
  if (args.windows < 1) throw InvalidArgument("--windows must be >= 1");
  SimulationOptions sim;
  sim.max_pairs_per_window = args.max_pairs;

  if (args.emit_timetags) {
    const WindowSpec window = args.window.window();
    const DeadTimes dead = args.window.dead();
    Output out(args.output);
    TimetagWriter writer(out.stream(), window, dead);
    for_each_window(
        model, dist, args.windows, args.seed,
        [&writer](DetectorOutcome o) { writer.write_window(o); }, sim);
    const auto& truth = writer.ground_truth();
    if (truth.discarded_windows > 0) {
      std::cerr << "pairstat: " << truth.discarded_windows << " of "
                << truth.total_periods
                << " windows fall in a dead time and will be discarded on "
                   "ingestion\n";
    }
  } else {
    Output out(args.output);
    ClickRecordWriter writer(out.stream());
    for_each_window(
        model, dist, args.windows, args.seed,
        [&writer](DetectorOutcome o) { writer.write(o); }, sim);
  }
}

// --- predict ----------------------------------------------------------------

struct PredictArgs {
  SetupFlags setup;
  std::string dist = "poisson";
  std::vector<double> ph;
  std::string output;
};

void run_predict(const PredictArgs& args, RunReport& report) {
  const SetupConfig cfg = args.setup.resolve();
  const PairDistributionKind kind = parse_distribution_kind(args.dist);
  echo_setup(report, cfg);
  report.settings["dist"] = std::string(to_string(kind));
  const SetupModel model = cfg.model();
  for (double ph : args.ph) {
    report.predictions.push_back(predict_at_heralding(model, kind, ph));
  }
}

void emit_report(const RunReport& report, const std::string& path) {
  const std::string text = to_json(report);
  try {
    Output out(path);
    out.stream() << text;
  } catch (const Error&) {
    std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-pair source click statistics"};
  app.require_subcommand(1);

  CharacterizeArgs ch;
  auto* characterize = app.add_subcommand(
      "characterize", "Recover transmissions and brightness from clicks");
  characterize->add_option("--input", ch.input, "Click-record or timetag CSV")
      ->required();
  characterize->add_option("--format", ch.format, "Input format")
      ->check(CLI::IsMember({"clicks", "timetags"}))
      ->capture_default_str();
  ch.window.attach(*characterize);
  ch.darks.attach(*characterize, "--darks", false);
  add_dist_option(*characterize, ch.dist);
  characterize->add_option("--resamples", ch.resamples, "Bootstrap resamples")
      ->capture_default_str();
  characterize->add_option("--seed", ch.seed, "Bootstrap seed")
      ->capture_default_str();
  characterize->add_option("--threads", ch.threads, "0 = all cores");
  characterize->add_flag("--strict", ch.strict,
                         "Treat model-consistency warnings as errors");
  characterize->add_option("--ph", ch.ph,
                           "Heralding probabilities for g2 predictions");
  characterize->add_option("--bound-eta-h", ch.bound_eta_h,
                           "Assumed eta_H for the brightness bound");
  characterize->add_option("--bound-eta-a", ch.bound_eta_a,
                           "Assumed eta_A for the brightness bound");
  characterize->add_option("--bound-eta-b", ch.bound_eta_b,
                           "Assumed eta_B for the brightness bound");
  characterize->add_option("--output", ch.output, "Report file (default stdout)");

  BoundArgs bd;
  auto* bound = app.add_subcommand(
      "bound-mu", "Upper bound on brightness from a measured G");
  bound->add_option("--g", bd.g, "Measured correlation strength")->required();
  bound->add_option("--eta-h", bd.eta_h, "Assumed eta_H")->required();
  bound->add_option("--eta-a", bd.eta_a, "Assumed eta_A")->required();
  bound->add_option("--eta-b", bd.eta_b, "Assumed eta_B (default eta_A)");
  bd.darks.attach(*bound, "--darks", false);
  add_dist_option(*bound, bd.dist);
  bound->add_option("--output", bd.output, "Report file (default stdout)");

  GCurveArgs gc;
  auto* gcurve = app.add_subcommand("g-curve", "CSV of G versus mu");
  gc.setup.attach(*gcurve, "--setup", true);
  add_dist_option(*gcurve, gc.dist);
  gcurve->add_option("--mu-min", gc.mu_min)->capture_default_str();
  gcurve->add_option("--mu-max", gc.mu_max)->capture_default_str();
  gcurve->add_option("--points", gc.points)->capture_default_str();
  gcurve->add_option("--spacing", gc.spacing)
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  gcurve->add_option("--output", gc.output, "CSV file (default stdout)");

  G2CurveArgs g2c;
  auto* g2curve = app.add_subcommand(
      "g2-curve", "CSV of mu, g2 and its approximation versus p_H");
  g2c.setup.attach(*g2curve, "--setup", true);
  g2curve->add_option("--ph-min", g2c.ph_min)->capture_default_str();
  g2curve->add_option("--ph-max", g2c.ph_max)->capture_default_str();
  g2curve->add_option("--points", g2c.points)->capture_default_str();
  g2curve->add_option("--spacing", g2c.spacing)
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  g2curve->add_flag("--thermal", g2c.thermal, "Thermal pair statistics");
  g2curve->add_option("--output", g2c.output, "CSV file (default stdout)");

  SimulateArgs sm;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo click records or timetags");
  sm.setup.attach(*simulate, "--setup", true);
  add_dist_option(*simulate, sm.dist);
  simulate->add_option("--mu", sm.mu, "Brightness")->required();
  simulate->add_option("--windows", sm.windows, "Number of windows")
      ->required();
  simulate->add_option("--seed", sm.seed)->capture_default_str();
  simulate->add_option("--max-pairs", sm.max_pairs,
                       "Cap on pairs per window");
  simulate->add_flag("--emit-timetags", sm.emit_timetags,
                     "Write a timetag stream instead of click records");
  sm.window.attach(*simulate);
  simulate->add_option("--output", sm.output, "Output file (default stdout)");

  PredictArgs pr;
  auto* predict = app.add_subcommand(
      "predict", "Brightness and g2 at given heralding probabilities");
  pr.setup.attach(*predict, "--setup", true);
  add_dist_option(*predict, pr.dist);
  predict->add_option("--ph", pr.ph, "Heralding probabilities")->required();
  predict->add_option("--output", pr.output, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::invalid_argument);
  }

  RunReport report;
  std::string report_path;
  try {
    if (characterize->parsed()) {
      report.command = "characterize";
      report_path = ch.output;
      run_characterize(ch, report);
      emit_report(report, report_path);
    } else if (bound->parsed()) {
      report.command = "bound-mu";
      report_path = bd.output;
      run_bound(bd, report);
      emit_report(report, report_path);
    } else if (predict->parsed()) {
      report.command = "predict";
      report_path = pr.output;
      run_predict(pr, report);
      emit_report(report, report_path);
    } else if (gcurve->parsed()) {
      report.command = "g-curve";
      run_g_curve(gc);
    } else if (g2curve->parsed()) {
      report.command = "g2-curve";
      run_g2_curve(g2c);
    } else if (simulate->parsed()) {
      report.command = "simulate";
      run_simulate(sm);
    }
  } catch (const Error& e) {
    std::cerr << "pairstat " << report.command << ": " << to_string(e.kind())
              << " error: " << e.what() << '\n';
    report.error = ErrorInfo{e.kind(), e.what()};
    emit_report(report, report_path);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "pairstat " << report.command << ": error: " << e.what()
              << '\n';
    report.error = ErrorInfo{ErrorKind::numerical, e.what()};
    emit_report(report, report_path);
    return exit_code(ErrorKind::numerical);
  }
  return 0;
}
