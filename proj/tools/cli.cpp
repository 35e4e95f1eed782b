#include "cli.hpp"

#include <sys/resource.h>

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "geocomm/engine.hpp"
#include "geocomm/error.hpp"
#include "geocomm/io.hpp"
#include "geocomm/kernels.hpp"
#include "geocomm/locality.hpp"
#include "geocomm/metrics.hpp"
#include "geocomm/synth.hpp"

namespace geocomm::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double peak_rss_mb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

struct Common {
  int threads = 1;
  std::uint64_t seed = 1;
  std::uint64_t sample_size = kDefaultPairSample;
  std::string metric = "planar";
};

struct GenerateArgs {
  SynthConfig cfg;
  std::string omega = "3";
  fs::path out_dir;
};

struct InputArgs {
  fs::path edges;
  fs::path locations;
  fs::path out_dir;
};

struct DetectArgs {
  InputArgs input;
  std::string variant = "similarity";
};

struct EvaluateArgs {
  InputArgs input;
  fs::path partition;
  fs::path labels;
};

struct BenchmarkArgs {
  std::vector<std::size_t> sizes{2500, 10000, 20000};
  std::string variant = "similarity";
  std::string omega = "3";
  double avg_degree = 15.0;
  std::size_t repeats = 1;
  fs::path out_file;
};

void add_input(CLI::App* cmd, InputArgs& in, bool need_out) {
  cmd->add_option("--edges", in.edges, "Edge file (<id_u><TAB><id_v>)")->required();
  cmd->add_option("--locations", in.locations, "Location file (<id><TAB><x><TAB><y>)")
      ->required();
  auto* out = cmd->add_option("-o,--out", in.out_dir, "Output directory");
  if (need_out) out->required();
}

void base_manifest(RunManifest& m, const std::string& subcommand, const Common& common) {
  m.set("subcommand", subcommand);
  m.set("seed", common.seed);
  m.set("sample_size", common.sample_size);
  m.set("metric", common.metric);
  m.set("threads", static_cast<std::uint64_t>(common.threads));
}

Network load(const InputArgs& in, const Common& common, std::ostream& err) {
  LoadDiagnostics diag;
  Network net = load_network(in.edges, in.locations, parse_metric(common.metric), &diag);
  if (diag.dropped_self_loops > 0) {
    err << "warning: dropped " << diag.dropped_self_loops << " self-loop(s)\n";
  }
  if (diag.dropped_duplicates > 0) {
    err << "warning: dropped " << diag.dropped_duplicates << " duplicate edge(s)\n";
  }
  return net;
}

void write_json(const fs::path& file, const json& doc) {
  auto out = open_output(file);
  out << doc.dump(2) << '\n';
}

json profile_json(std::span<const SizeBucket> profile) {
  json rows = json::array();
  for (const auto& b : profile) {
    rows.push_back({{"size", b.size},
                    {"communities", b.communities},
                    {"mean_span_km", b.mean_span_km},
                    {"mean_internal_degree", b.mean_internal_degree}});
  }
  return rows;
}

int cmd_generate(GenerateArgs& args, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  args.cfg.omega = parse_omega(args.omega);
  args.cfg.seed = common.seed;
  const SynthNetwork synth = generate(args.cfg);
  write_synth_files(synth, args.cfg, args.out_dir);
  const Network& net = synth.network;
  const double mean_degree =
      2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.node_count());

  RunManifest m;
  base_manifest(m, "generate", common);
  m.set("out_dir", args.out_dir.string());
  m.set("grid_side", static_cast<std::uint64_t>(args.cfg.grid_side));
  m.set("node_count", static_cast<std::uint64_t>(args.cfg.nodes()));
  m.set("label_count", static_cast<std::uint64_t>(args.cfg.label_count));
  m.set("omega", format_omega(args.cfg.omega));
  m.set("p_same", args.cfg.p_same);
  m.set("p_diff", args.cfg.p_diff);
  m.set("target_avg_degree", args.cfg.target_avg_degree);
  m.set("alpha", synth.alpha);
  m.set("edge_count", static_cast<std::uint64_t>(net.edge_count()));
  m.set("mean_degree", mean_degree);
  m.set("time_generate_s", seconds_since(start));
  m.write(args.out_dir / "manifest.txt");

  out << "nodes=" << net.node_count() << " edges=" << net.edge_count()
      << " mean_degree=" << mean_degree << " alpha=" << synth.alpha << '\n';
  return 0;
}

int cmd_analyze(const InputArgs& in, const Common& common, std::ostream& out,
                std::ostream& err) {
  auto start = Clock::now();
  const Network net = load(in, common, err);
  const double t_load = seconds_since(start);
  start = Clock::now();
  const auto report = locality_report(net, common.sample_size, common.seed);
  const double t_report = seconds_since(start);

  out.precision(6);
  out << "tvd=" << report.tvd << '\n'
      << "inflection_km=" << report.inflection_km << '\n'
      << "sigma_km=" << report.sigma_km << '\n'
      << "suitable=" << (report.suitable ? "true" : "false") << '\n';
  if (report.degenerate()) err << "warning: all nodes share one location (sigma = 0)\n";

  if (!in.out_dir.empty()) {
    auto file = open_output(in.out_dir / "locality.txt");
    write_locality_report(file, report);
    RunManifest m;
    base_manifest(m, "analyze", common);
    m.set("edges", in.edges.string());
    m.set("locations", in.locations.string());
    m.set("out_dir", in.out_dir.string());
    m.set("time_load_s", t_load);
    m.set("time_analyze_s", t_report);
    m.write(in.out_dir / "manifest.txt");
  }
  return 0;
}

int cmd_detect(const DetectArgs& args, const Common& common, std::ostream& out,
               std::ostream& err) {
  const Variant variant = parse_variant(args.variant);
  auto start = Clock::now();
  const Network net = load(args.input, common, err);
  const double t_load = seconds_since(start);

  DetectOptions options;
  options.sigma_sample = common.sample_size;
  options.seed = common.seed;

  RunManifest m;
  base_manifest(m, "detect", common);
  m.set("edges", args.input.edges.string());
  m.set("locations", args.input.locations.string());
  m.set("variant", variant_name(variant));
  m.set("out_dir", args.input.out_dir.string());
  m.set("time_load_s", t_load);

  json summary{{"variant", variant_name(variant)},
               {"nodes", net.node_count()},
               {"edges", net.edge_count()}};
  Dendrogram dendrogram;
  if (net.edge_count() == 0) {
    dendrogram = detect(net, variant, options);
  } else {
    start = Clock::now();
    double sigma = 0.0;
    if (variant != Variant::kBaseline) {
      sigma = mean_pair_distance(net, options.sigma_sample, options.seed);
    }
    const auto ctx = WeightContext::build(net, variant, sigma);
    const double t_context = seconds_since(start);
    start = Clock::now();
    dendrogram = detect(net, ctx, options);
    const double t_detect = seconds_since(start);
    summary["sigma_km"] = ctx.sigma_km();
    summary["omega"] = ctx.omega();
    summary["tau"] = ctx.tau();
    summary["q_modularity"] = modularity(net, ctx, dendrogram.partition);
    m.set("sigma_km", ctx.sigma_km());
    m.set("time_context_s", t_context);
    m.set("time_detect_s", t_detect);
  }
  summary["q_initial"] = dendrogram.q_initial;
  summary["q_final"] = dendrogram.q_final;
  summary["merges"] = dendrogram.merges.size();
  summary["communities"] = dendrogram.partition.community_count();
  m.set("merges", static_cast<std::uint64_t>(dendrogram.merges.size()));
  m.set("communities", static_cast<std::uint64_t>(dendrogram.partition.community_count()));
  m.set("peak_rss_mb", peak_rss_mb());

  {
    auto file = open_output(args.input.out_dir / "partition.tsv");
    write_partition(file, net, dendrogram.partition);
  }
  {
    auto file = open_output(args.input.out_dir / "dendrogram.csv");
    write_dendrogram(file, dendrogram);
  }
  write_json(args.input.out_dir / "summary.json", summary);
  m.write(args.input.out_dir / "manifest.txt");

  out << "communities=" << dendrogram.partition.community_count()
      << " merges=" << dendrogram.merges.size() << " Q=" << dendrogram.q_final << '\n';
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args, const Common& common, std::ostream& out,
                 std::ostream& err) {
  const Network net = load(args.input, common, err);
  const auto labels = read_node_labels(args.partition, net);
  const Partition partition = Partition::from_labels(labels);
  const auto scores = score_communities(net, partition);
  const auto profile = size_profile(scores);

  json summary{{"communities", partition.community_count()},
               {"nodes", net.node_count()},
               {"size_profile", profile_json(profile)}};
  if (!args.labels.empty()) {
    const auto truth = read_node_labels(args.labels, net);
    const double acc = accuracy(partition, truth);
    summary["accuracy"] = acc;
    out << "accuracy=" << acc << '\n';
  }
  double span_sum = 0.0;
  for (const auto& s : scores) span_sum += s.span_km;
  summary["mean_span_km"] = scores.empty() ? 0.0 : span_sum / static_cast<double>(scores.size());
  out << "communities=" << partition.community_count() << '\n';

  {
    auto file = open_output(args.input.out_dir / "scores.csv");
    write_scores(file, scores);
  }
  write_json(args.input.out_dir / "summary.json", summary);
  RunManifest m;
  base_manifest(m, "evaluate", common);
  m.set("partition", args.partition.string());
  m.set("labels", args.labels.string());
  m.set("edges", args.input.edges.string());
  m.set("locations", args.input.locations.string());
  m.write(args.input.out_dir / "manifest.txt");
  return 0;
}

int cmd_benchmark(const BenchmarkArgs& args, const Common& common, std::ostream& out) {
  const Variant variant = parse_variant(args.variant);
  std::ostringstream table;
  table << "nodes,edges,generate_s,detect_s,communities,q,deterministic\n";
  for (std::size_t size : args.sizes) {
    SynthConfig cfg;
    cfg.omega = parse_omega(args.omega);
    cfg.seed = common.seed;
    cfg.grid_side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(size))));
    cfg.node_count = size;
    cfg.target_avg_degree = args.avg_degree;
    auto start = Clock::now();
    const SynthNetwork synth = generate(cfg);
    const double t_gen = seconds_since(start);

    DetectOptions options;
    options.sigma_sample = common.sample_size;
    options.seed = common.seed;
    double best = 0.0;
    Dendrogram first;
    bool deterministic = true;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, args.repeats); ++r) {
      start = Clock::now();
      Dendrogram d = detect(synth.network, variant, options);
      const double t = seconds_since(start);
      if (r == 0) {
        best = t;
        first = std::move(d);
      } else {
        best = std::min(best, t);
        deterministic = deterministic && d.partition == first.partition;
      }
    }
    table << synth.network.node_count() << ',' << synth.network.edge_count() << ',' << t_gen
          << ',' << best << ',' << first.partition.community_count() << ',' << first.q_final
          << ',' << (deterministic ? "true" : "false") << '\n';
  }
  out << table.str();
  if (!args.out_file.empty()) {
    auto file = open_output(args.out_file);
    file << table.str();
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community detection on location-tagged networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "Worker threads for parallel phases")
      ->default_val(1);
  app.add_option("--seed", common.seed, "RNG seed")->default_val(1);
  app.add_option("--sample-size", common.sample_size, "Pair sample size for sigma and CDFs")
      ->default_val(kDefaultPairSample);
  app.add_option("--metric", common.metric, "planar or geo")->default_val("planar");

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic planted network");
  generate_cmd->add_option("--grid-side", gen.cfg.grid_side)->default_val(50);
  generate_cmd->add_option("--nodes", gen.cfg.node_count, "0 = grid-side^2")->default_val(0);
  generate_cmd->add_option("--labels", gen.cfg.label_count)->default_val(10);
  generate_cmd->add_option("--omega", gen.omega, "Distance scale, or inf")->default_val("3");
  generate_cmd->add_option("--p-same", gen.cfg.p_same)->default_val(0.5);
  generate_cmd->add_option("--p-diff", gen.cfg.p_diff)->default_val(0.1);
  generate_cmd->add_option("--avg-degree", gen.cfg.target_avg_degree)->default_val(15.0);
  generate_cmd->add_option("-o,--out", gen.out_dir, "Output directory")->required();

  InputArgs analyze_in;
  auto* analyze_cmd = app.add_subcommand("analyze", "Locality diagnostic (TVD, inflection, sigma)");
  add_input(analyze_cmd, analyze_in, false);

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Greedy modularity community detection");
  add_input(detect_cmd, det.input, true);
  detect_cmd->add_option("--variant", det.variant, "baseline, locality or similarity")
      ->default_val("similarity");

  EvaluateArgs eval;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a partition");
  add_input(evaluate_cmd, eval.input, true);
  evaluate_cmd->add_option("--partition", eval.partition, "Partition file")->required();
  evaluate_cmd->add_option("--labels", eval.labels, "Ground-truth label file");

  BenchmarkArgs bench;
  auto* benchmark_cmd = app.add_subcommand("benchmark", "Detection wall time over a size sweep");
  benchmark_cmd->add_option("--sizes", bench.sizes)->delimiter(',');
  benchmark_cmd->add_option("--variant", bench.variant)->default_val("similarity");
  benchmark_cmd->add_option("--omega", bench.omega)->default_val("3");
  benchmark_cmd->add_option("--avg-degree", bench.avg_degree)->default_val(15.0);
  benchmark_cmd->add_option("--repeats", bench.repeats)->default_val(1);
  benchmark_cmd->add_option("-o,--out", bench.out_file, "Write the table to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  kernels::set_threads(common.threads);
  try {
    if (*generate_cmd) return cmd_generate(gen, common, out);
    if (*analyze_cmd) return cmd_analyze(analyze_in, common, out, err);
    if (*detect_cmd) return cmd_detect(det, common, out, err);
    if (*evaluate_cmd) return cmd_evaluate(eval, common, out, err);
    if (*benchmark_cmd) return cmd_benchmark(bench, common, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace geocomm::cli
