#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "blpp/pipeline.hpp"
#include "blpp/verify.hpp"

namespace {

using namespace blpp;

// Exit codes: 0 pass, 1 check failure, 2 configuration error.
constexpr int kConfigError = 2;

struct CommonArgs {
  std::string config_path;
  std::string field_path;
  std::string out_dir = "out";
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig config;
  if (!args.config_path.empty()) config = parse_config_file(args.config_path);
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  return config;
}

BrownianField field_from(const CommonArgs& args, const RunConfig& config) {
  if (!args.field_path.empty()) return load_field(args.field_path);
  return generate_field(config.field);
}

std::string out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return config.out_dir + "/" + name;
}

bool parse_range(const std::string& text, double& lo, double& hi) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) return false;
  lo = std::stod(text.substr(0, pos));
  hi = std::stod(text.substr(pos + 2));
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian last-passage percolation laboratory"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "key = value configuration file");
  app.add_option("--out", common.out_dir, "output directory");
  bool dump_defaults = false;
  app.add_flag("--dump-config", dump_defaults, "print the effective configuration and exit");

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate and save a field");
  std::string gen_levels = "0..256", gen_window = "-50..300", gen_out = "field.blpp";
  double gen_delta = 0.05;
  std::uint64_t gen_seed = 7;
  gen->add_option("--seed", gen_seed);
  gen->add_option("--levels", gen_levels, "a..b integer level range");
  gen->add_option("--window", gen_window, "t_min..t_max");
  gen->add_option("--delta", gen_delta, "grid spacing");
  gen->add_option("--file", gen_out, "output field file");

  // --- profiles ----------------------------------------------------------
  auto* profiles = app.add_subcommand("profiles", "forward/reverse passage profiles");
  double pr_theta = 1.0;
  int pr_horizon = 200;
  double pr_origin_time = 0.0;
  int pr_origin_level = 0;
  profiles->add_option("--theta", pr_theta);
  profiles->add_option("--horizon", pr_horizon);
  profiles->add_option("--origin-level", pr_origin_level);
  profiles->add_option("--origin-time", pr_origin_time);

  // --- geodesics ---------------------------------------------------------
  auto* geodesics = app.add_subcommand("geodesics", "trace a geodesic fan to one target");
  double geo_theta = 1.0;
  int geo_horizon = 200, geo_count = 40;
  geodesics->add_option("--theta", geo_theta);
  geodesics->add_option("--horizon", geo_horizon);
  geodesics->add_option("--count", geo_count, "number of fan origins");

  // --- shocks ------------------------------------------------------------
  auto* shocks_cmd = app.add_subcommand("shocks", "detect and classify shock points");
  // --- ig ----------------------------------------------------------------
  auto* ig = app.add_subcommand("ig", "build the instability graph");
  // --- cif ---------------------------------------------------------------
  auto* cif_cmd = app.add_subcommand("cif", "trace competition interfaces");
  int cif_count = 20, cif_levels = 150;
  cif_cmd->add_option("--count", cif_count);
  cif_cmd->add_option("--levels", cif_levels);
  // --- reconstruct ---------------------------------------------------------
  auto* rec = app.add_subcommand("reconstruct", "rebuild the graph skeleton from shocks");

  double opt_gamma = -1, opt_delta_dir = -1, opt_eta = -1;
  int opt_horizon = -1;
  std::uint64_t opt_seed = 0;
  for (auto* cmd : {shocks_cmd, ig, rec}) {
    cmd->add_option("--gamma", opt_gamma, "low direction");
    cmd->add_option("--delta-dir", opt_delta_dir, "high direction");
    cmd->add_option("--eta", opt_eta, "surrogate offset factor");
    cmd->add_option("--horizon", opt_horizon);
    cmd->add_option("--seed", opt_seed);
  }

  // --- verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run the named property checks");
  bool smoke = false, inject_fault = false;
  std::string only_check;
  verify->add_flag("--smoke", smoke, "single-seed reduced-size run");
  verify->add_flag("--inject-fault", inject_fault, "force a monotonicity violation (self-test)");
  verify->add_option("--check", only_check, "run one named check");
  bool list_checks = false;
  verify->add_flag("--list", list_checks, "list check names");

  for (auto* cmd :
       {gen, profiles, geodesics, shocks_cmd, ig, cif_cmd, rec, verify}) {
    cmd->add_option("--field", common.field_path, "load a saved field instead of generating");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = load_config(common);
    if (opt_gamma > 0) config.gamma = opt_gamma;
    if (opt_delta_dir > 0) config.delta_dir = opt_delta_dir;
    if (opt_eta >= 0) config.eta_factor = opt_eta;
    if (opt_seed) config.field.seed = opt_seed;
    if (smoke) config.smoke = true;

    if (dump_defaults) {
      std::fputs(dump_config(config).c_str(), stdout);
      return 0;
    }

    if (gen->parsed()) {
      FieldSpec spec;
      double lo, hi;
      if (!parse_range(gen_levels, lo, hi)) throw std::invalid_argument("gen: bad --levels");
      spec.level_min = static_cast<int>(lo);
      spec.level_max = static_cast<int>(hi);
      if (!parse_range(gen_window, lo, hi)) throw std::invalid_argument("gen: bad --window");
      spec.t_min = lo;
      spec.t_max = hi;
      spec.delta = gen_delta;
      spec.seed = gen_seed;
      spec.validate();
      save_field(generate_field(spec), out_path(config, gen_out));
      std::printf("wrote %s (%d levels x %d nodes)\n", out_path(config, gen_out).c_str(),
                  spec.levels(), spec.nodes());
      return 0;
    }

    if (profiles->parsed()) {
      config.field.seed = opt_seed ? opt_seed : config.field.seed;
      FieldSpec spec = window_spec(pr_horizon, pr_theta * pr_horizon * 1.05, config.field.delta,
                                   config.field.seed);
      const BrownianField field =
          common.field_path.empty() ? generate_field(spec) : load_field(common.field_path);
      spec = field.spec;
      const GridPoint origin{pr_origin_level, spec.index_of(pr_origin_time)};
      const ForwardProfile fwd = forward_profile(field, origin, std::min(pr_horizon, spec.level_max));
      export_profile_csv(fwd, spec, out_path(config, "forward_profile.csv"));
      const ReverseProfile rev =
          reverse_profile(field, make_target(spec, std::min(pr_horizon, spec.level_max), pr_theta));
      export_reverse_profile_csv(rev, spec, out_path(config, "reverse_profile.csv"));
      std::printf("wrote forward_profile.csv and reverse_profile.csv under %s\n",
                  config.out_dir.c_str());
      return 0;
    }

    if (geodesics->parsed()) {
      const FieldSpec spec = window_spec(geo_horizon, geo_theta * geo_horizon * 1.05,
                                         config.field.delta, config.field.seed);
      const BrownianField field =
          common.field_path.empty() ? generate_field(spec) : load_field(common.field_path);
      const ReverseProfile w =
          reverse_profile(field, make_target(field.spec, geo_horizon, geo_theta));
      const ArgmaxMaps maps = argmax_maps(field, w, 0);
      std::vector<SemiGeodesic> fan;
      const int zero = field.spec.zero_index();
      const int span = std::max(1, field.spec.index_of(0.4 * geo_theta * geo_horizon) - zero);
      for (int k = 0; k < geo_count; ++k) {
        const GridPoint origin{0, zero + (k * span) / std::max(1, geo_count - 1)};
        fan.push_back(busemann_geodesic(maps, origin, Side::Left));
      }
      export_geodesic_fan_svg(fan, field.spec, out_path(config, "geodesic_fan.svg"));
      for (std::size_t k = 0; k < fan.size(); k += std::max<std::size_t>(1, fan.size() / 4))
        export_path_csv(fan[k].path, field.spec,
                        out_path(config, "geodesic_" + std::to_string(k) + ".csv"));
      std::printf("wrote geodesic_fan.svg (%d origins)\n", geo_count);
      return 0;
    }

    if (shocks_cmd->parsed() || ig->parsed() || rec->parsed()) {
      config.validate();
      RunParams params =
          run_params_from(config, config.field.seed, opt_horizon > 0 ? opt_horizon : 200);
      const TwoSidedRun run = run_two_sided(params);
      const FieldSpec& spec = run.field.spec;
      if (shocks_cmd->parsed()) {
        export_shocks_json(run.shocks_low, spec, out_path(config, "shocks_low.json"), "gamma-");
        export_shocks_json(run.shocks_high, spec, out_path(config, "shocks_high.json"), "delta+");
        const ShockTree tree = build_tree(run.shocks_low, run.maps_low);
        export_shock_tree_svg(tree, &run.classes, spec, config.match_radius,
                              out_path(config, "shock_tree.svg"));
        std::printf("shocks: low=%zu high=%zu both=%zu\n", run.shocks_low.shocks.size(),
                    run.shocks_high.shocks.size(), run.classes.both_a.size());
      }
      if (ig->parsed()) {
        export_graph_json(run.graph, spec, out_path(config, "instability_graph.json"));
        export_graph_svg(run.graph, spec, out_path(config, "instability_graph.svg"));
        std::printf("graph: intervals=%zu edges=%zu\n", run.graph.intervals.size(),
                    run.graph.edges.size());
      }
      if (rec->parsed()) {
        const Skeleton skeleton =
            reconstruct_skeleton(run.classes.only_b, run.classes.only_a, run.col_hi + 1);
        export_skeleton_json(skeleton, spec, out_path(config, "skeleton.json"));
        export_overlay_svg(skeleton, run.graph, spec, out_path(config, "skeleton_overlay.svg"));
        const SkeletonScore score = compare_graphs(skeleton, run.graph, 2, config.iso_gap);
        std::printf("skeleton: intervals=%zu edges=%zu interval_recall=%.3f edge_recall=%.3f\n",
                    skeleton.intervals.size(), skeleton.edges.size(), score.interval_recall(),
                    score.edge_recall());
      }
      return 0;
    }

    if (cif_cmd->parsed()) {
      const FieldSpec spec = window_spec(cif_levels + 20, 1.2 * (cif_levels + 20),
                                         config.field.delta, config.field.seed);
      const BrownianField field =
          common.field_path.empty() ? generate_field(spec) : load_field(common.field_path);
      std::mt19937_64 rng(field.spec.seed + 3);
      std::vector<DirectionEstimate> estimates;
      for (int k = 0; k < cif_count; ++k) {
        const GridPoint root{static_cast<int>(rng() % 10),
                             field.spec.zero_index() +
                                 static_cast<int>(rng() % static_cast<unsigned>(
                                                      field.spec.index_of(20.0) -
                                                      field.spec.zero_index()))};
        estimates.push_back(estimate_directions(field, root, cif_levels));
        if (k < 4) {
          const CompetitionInterface cif = trace_cif(field, root, Side::Right, cif_levels);
          export_cif_csv(cif, field.spec, out_path(config, "cif_" + std::to_string(k) + ".csv"));
        }
      }
      export_directions_json(estimates, field.spec, out_path(config, "cif_directions.json"));
      std::printf("wrote cif_directions.json (%d roots)\n", cif_count);
      return 0;
    }

    if (verify->parsed()) {
      config.validate();
      if (list_checks) {
        for (const auto& id : check_ids()) std::printf("%s\n", id.c_str());
        return 0;
      }
      VerifyOptions options;
      options.inject_fault = inject_fault;
      std::vector<CheckResult> results;
      if (!only_check.empty())
        results.push_back(run_check(only_check, config, options));
      else
        results = run_all_checks(config, options);
      print_report(results);
      write_report_json(results, out_path(config, "verify_report.json"));
      return report_exit_code(results);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
