#include "ifsdf/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ifsdf/constructions.hpp"
#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"
#include "ifsdf/inverse.hpp"
#include "ifsdf/io.hpp"
#include "ifsdf/randstats.hpp"
#include "ifsdf/simulation.hpp"

namespace ifsdf {

namespace {

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty()) {
    out << contents;
  } else {
    write_file(path, contents);
  }
}

std::vector<double> mesh_with(std::size_t size, const std::vector<double>& extra) {
  auto mesh = uniform_mesh(size);
  mesh.insert(mesh.end(), extra.begin(), extra.end());
  return mesh;
}

bool looks_like_distribution(const std::string& spec) {
  return spec == "uniform" || spec.rfind("beta:", 0) == 0;
}

DistributionFunctionPtr load_target(const std::string& spec) {
  if (looks_like_distribution(spec)) return beta_df(parse_distribution(spec));
  if (spec.rfind("edf:", 0) == 0) {
    return std::make_shared<const EmpiricalDF>(parse_sample(read_file(spec.substr(4))));
  }
  return std::make_shared<const GridDF>(grid_from_csv(read_file(spec)));
}

std::vector<double> load_partition(const std::string& spec) {
  if (spec.rfind("auto:", 0) == 0) {
    const int cells = std::stoi(spec.substr(5));
    if (cells < 1) throw std::invalid_argument("partition auto:N needs N >= 1");
    std::vector<double> cuts;
    for (int i = 1; i <= cells; ++i) cuts.push_back(static_cast<double>(i) / (cells + 1));
    return cuts;
  }
  return parse_sample(read_file(spec));
}

// Fills options not given on the command line from a key=value file.
// The INI reader splits unquoted values at commas; glue "beta:3" "5" back together.
std::vector<std::string> regroup_distributions(const std::vector<std::string>& inputs) {
  std::vector<std::string> tokens;
  for (const auto& input : inputs) {
    std::istringstream words(input);
    for (std::string w; words >> w;) tokens.push_back(w);
  }
  std::vector<std::string> out;
  for (const auto& v : tokens) {
    const bool continues = !v.empty() && (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '.');
    if (continues && !out.empty() && out.back().find(':') != std::string::npos) {
      out.back() += "," + v;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

void apply_config(CLI::App& sub, const std::string& path) {
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw CLI::ValidationError("config", "unknown key '" + item.name + "' in " + path);
    }
    if (opt->count() > 0) continue;
    const auto values = item.name == "dist" ? regroup_distributions(item.inputs) : item.inputs;
    for (const auto& value : values) opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated function systems on distribution functions over [0,1]", "ifsdf"};
  app.require_subcommand(1);

  // approximate
  std::string approx_dist = "uniform";
  std::size_t approx_points = 3;
  int approx_iters = 4;
  std::size_t approx_mesh = 201;
  std::string approx_out;
  auto* approximate = app.add_subcommand("approximate", "Quantile IFS of a known CDF; dumps T^s u as x,value CSV");
  approximate->add_option("--dist", approx_dist, "beta:A,B or uniform")->required();
  approximate->add_option("--points", approx_points, "Number of interior quantile points")->check(CLI::PositiveNumber);
  approximate->add_option("--iters", approx_iters, "Iterations from the uniform start")->check(CLI::PositiveNumber);
  approximate->add_option("--mesh", approx_mesh, "Equally spaced evaluation points")->check(CLI::Range(2, 1 << 20));
  approximate->add_option("--out", approx_out, "Output CSV (stdout if omitted)");

  // edf-ifs
  std::string edf_sample;
  std::string edf_out;
  auto* edf = app.add_subcommand("edf-ifs", "Exact IFS representation of an empirical distribution function");
  edf->add_option("--sample", edf_sample, "Sample file, one value in (0,1) per line")->required();
  edf->add_option("--out", edf_out, "Output JSON (stdout if omitted)");

  // invert
  std::string inv_target;
  std::string inv_partition;
  std::size_t inv_grid = kDefaultCollageGrid;
  std::string inv_out;
  auto* invert = app.add_subcommand("invert", "Solve the collage inverse problem on an identity partition");
  invert->add_option("--target", inv_target, "x,value CSV, edf:<sample file>, beta:A,B or uniform")->required();
  invert->add_option("--partition", inv_partition, "File of interior cut points, or auto:N")->required();
  invert->add_option("--grid-size", inv_grid, "Grid size used in grid mode")->check(CLI::Range(2, 1 << 20));
  invert->add_option("--out", inv_out, "Output JSON report (stdout if omitted)");

  // estimate
  std::string est_sample;
  std::size_t est_k = 2;
  int est_iters = 4;
  std::size_t est_mesh = 201;
  std::string est_out;
  auto* estimate = app.add_subcommand("estimate", "Empirical-quantile IFS estimator; dumps T^s u as x,value CSV");
  estimate->add_option("--sample", est_sample, "Sample file, one value in (0,1) per line")->required();
  estimate->add_option("--k", est_k, "Number of quantile cells (2 <= k < n)")->required();
  estimate->add_option("--iters", est_iters, "Iterations from the uniform start")->check(CLI::PositiveNumber);
  estimate->add_option("--mesh", est_mesh, "Equally spaced evaluation points")->check(CLI::Range(2, 1 << 20));
  estimate->add_option("--out", est_out, "Output CSV (stdout if omitted)");

  // simulate
  std::vector<std::string> sim_dists{"beta:2,2"};
  std::vector<std::size_t> sim_n{10, 50, 100, 500, 1000};
  std::string sim_k = "auto";
  std::size_t sim_trials = 30;
  std::optional<std::uint64_t> sim_seed;
  std::size_t sim_eval = 20;
  int sim_iters = 4;
  unsigned sim_threads = 1;
  bool sim_exact = false;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Estimator vs e.d.f. sup-distance table over seeded trials");
  std::string sim_config;
  simulate->add_option("--config", sim_config, "key=value file; command-line flags take precedence");
  simulate->add_option("--dist", sim_dists, "Distribution(s); repeat the flag for several")->capture_default_str();
  simulate->add_option("--n", sim_n, "Sample sizes, comma separated")->delimiter(',')->capture_default_str();
  simulate->add_option("--k", sim_k, "Quantile cells K, or auto = ceil(n/2) capped at n-1")->capture_default_str();
  simulate->add_option("--trials", sim_trials, "Trials per row")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim_seed, "64-bit seed (falls back to $IFS_SEED, then 1)");
  simulate->add_option("--eval-points", sim_eval, "Equally spaced evaluation points")->check(CLI::Range(2, 1 << 20));
  simulate->add_option("--iters", sim_iters, "Estimator iterations from the uniform start")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim_threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--exact-sup", sim_exact, "Add breakpoints to the evaluation points");
  simulate->add_option("--out", sim_out, "Output CSV (stdout if omitted)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (!sim_config.empty()) apply_config(*simulate, sim_config);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (approximate->parsed()) {
      const auto target = beta_df(parse_distribution(approx_dist));
      const auto grid = quantile_grid(*target, approx_points);
      const auto system = quantile_ifs(*target, approx_points);
      const auto result = iterate(system, uniform_df(), approx_iters, mesh_with(approx_mesh, grid.abscissae));
      emit(approx_out, grid_to_csv(result), out);
    } else if (edf->parsed()) {
      const auto system = edf_ifs(parse_sample(read_file(edf_sample)));
      emit(edf_out, system_to_json(system).dump(2) + "\n", out);
    } else if (invert->parsed()) {
      const auto problem = CollageProblem::identity_partition(load_target(inv_target), load_partition(inv_partition));
      const auto solution = solve_inverse(problem);
      emit(inv_out, solution_to_json(solution).dump(2) + "\n", out);
    } else if (estimate->parsed()) {
      const auto sample = parse_sample(read_file(est_sample));
      const auto grid = empirical_quantile_grid(sample, est_k);
      const auto system = quantile_estimator(sample, est_k);
      const auto result = iterate(system, uniform_df(), est_iters, mesh_with(est_mesh, grid.abscissae));
      emit(est_out, grid_to_csv(result), out);
    } else if (simulate->parsed()) {
      std::uint64_t seed = 1;
      if (sim_seed) {
        seed = *sim_seed;
      } else if (const char* env = std::getenv("IFS_SEED")) {
        seed = std::stoull(env);
      }
      std::vector<TrialConfig> configs;
      for (const auto& d : sim_dists) {
        const auto params = parse_distribution(d);
        for (std::size_t n : sim_n) {
          TrialConfig c;
          c.distribution = params;
          c.n = n;
          if (sim_k != "auto") c.k = std::stoul(sim_k);
          c.iterations = sim_iters;
          c.eval_points = sim_eval;
          c.trials = sim_trials;
          c.seed = seed;
          c.exact_sup = sim_exact;
          configs.push_back(c);
        }
      }
      const auto table = run_table(configs, sim_threads);
      for (const auto& row : table.rows) {
        err << row.config.distribution.label() << " n=" << row.config.n << " mean-of-ratios "
            << row.mean_ratio_pct << "%\n";
      }
      emit(sim_out, table_to_csv(table), out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace ifsdf
