#include "treeconvex/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "treeconvex/convexity.hpp"
#include "treeconvex/io.hpp"

namespace treeconvex::cli {

namespace {

using Json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  return is;
}

// Writes to `path`, or to `fallback` when the path is empty and a fallback
// is given.
void emit(const std::string& path, std::ostream* fallback,
          const std::function<void(std::ostream&)>& write) {
  if (!path.empty()) {
    auto os = open_output(path);
    write(os);
  } else if (fallback) {
    write(*fallback);
  }
}

Json config_echo(const RunConfig& cfg) {
  Json j;
  j["m"] = cfg.m;
  j["depth"] = cfg.depth;
  j["variant"] = std::string(to_string(cfg.solve.variant));
  if (cfg.solve.variant == Variant::kKConvex) j["k"] = cfg.solve.k;
  j["datum"] = cfg.datum;
  j["sampling"] = cfg.sampling.to_string();
  j["tol"] = cfg.solve.tol;
  j["max_iter"] = cfg.solve.max_iter;
  j["sweep"] = std::string(to_string(cfg.solve.sweep));
  return j;
}

Json report_json(const SolveReport& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["final_residual"] = r.final_residual;
  j["converged"] = r.converged;
  j["monotone"] = r.monotone;
  return j;
}

Json verdict_json(const ConvexityVerdict& v) {
  Json j;
  j["holds"] = v.holds;
  Json list = Json::array();
  for (const auto& viol : v.violations) {
    list.push_back({{"vertex", viol.vertex.to_string()},
                    {"value", viol.value},
                    {"bound", viol.bound}});
  }
  j["violations"] = std::move(list);
  return j;
}

template <typename F>
Json budgeted(F&& f) {
  try {
    return verdict_json(f());
  } catch (const BudgetExceeded& e) {
    return Json{{"skipped", "budget"}, {"reason", e.what()}};
  }
}

std::vector<double> leaf_data(const RunConfig& cfg, const TruncatedTree& tree) {
  const std::string& spec = cfg.datum;
  for (const char* prefix : {"ref-convex:", "ref-binary:"}) {
    const std::string p(prefix);
    if (spec.rfind(p, 0) == 0) {
      const Vertex x0 = Vertex::parse(cfg.m, spec.substr(p.size()));
      const TreeFunction ref = p == "ref-convex:" ? reference_convex_indicator(tree, x0)
                                                 : reference_binary_indicator(tree, x0);
      return {ref.leaves().begin(), ref.leaves().end()};
    }
  }
  return sample_leaves(load_datum(cfg.datum), tree, cfg.sampling);
}

TreeFunction read_input_function(const RunConfig& cfg, const TruncatedTree& tree) {
  if (cfg.input.empty()) throw ConfigError("--input is required for " + cfg.command);
  auto is = open_input(cfg.input);
  return read_function_csv(is, tree);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const TruncatedTree tree(cfg.m, cfg.depth, cfg.vertex_budget);
  const auto leaves = leaf_data(cfg, tree);
  const SolveReport report = solve(tree, leaves, cfg.solve);

  emit(cfg.out_csv, &out, [&](std::ostream& os) { write_function_csv(os, report.solution); });
  Json j;
  j["command"] = "solve";
  j["report"] = report_json(report);
  if (cfg.solve.variant == Variant::kKConvex) {
    j["k_in_stated_range"] = kconvex_in_stated_range(cfg.m, cfg.solve.k);
  }
  j["config"] = config_echo(cfg);
  emit(cfg.out_json, nullptr, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  emit(cfg.out_dot, nullptr, [&](std::ostream& os) { write_dot(os, report.solution); });
  return report.converged ? kOk : kNotConverged;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const TruncatedTree tree(cfg.m, cfg.depth, cfg.vertex_budget);
  const TreeFunction u = read_input_function(cfg, tree);
  Json j;
  j["command"] = "check";
  j["convex_operator"] = verdict_json(is_convex_operator(u));
  j["convex_segment"] = budgeted([&] { return is_convex_segment(u); });
  j["binary_operator"] = verdict_json(is_binary_convex(u, BinaryCheckMode::kOperator));
  j["binary_subtrees"] =
      budgeted([&] { return is_binary_convex(u, BinaryCheckMode::kSubtrees); });
  j["config"] = {{"m", cfg.m}, {"depth", cfg.depth}, {"input", cfg.input}};
  emit(cfg.out_json, &out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

int cmd_obstacle(const RunConfig& cfg, std::ostream& out) {
  const TruncatedTree tree(cfg.m, cfg.depth, cfg.vertex_budget);
  const TreeFunction f = read_input_function(cfg, tree);
  const ObstacleResult result = solve_obstacle(f, cfg.solve);

  const auto env = result.envelope.values();
  const auto obs = f.values();
  const double min_env = *std::min_element(env.begin(), env.end());
  const double min_obs = *std::min_element(obs.begin(), obs.end());
  bool minimizers_kept = true;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i] == min_obs && env[i] != min_env) minimizers_kept = false;
  }

  emit(cfg.out_csv, &out, [&](std::ostream& os) {
    write_function_csv(os, result.envelope, &result.coincidence_mask);
  });
  Json j;
  j["command"] = "obstacle";
  j["report"] = report_json(result.report);
  j["coincidence_count"] = result.coincidence_count();
  j["vertex_count"] = tree.vertex_count();
  j["min_envelope"] = min_env;
  j["min_obstacle"] = min_obs;
  j["min_matches"] = min_env == min_obs;
  j["minimizers_preserved"] = minimizers_kept;
  Json echo = config_echo(cfg);
  echo.erase("datum");
  echo.erase("sampling");
  echo["input"] = cfg.input;
  j["config"] = std::move(echo);
  emit(cfg.out_json, nullptr, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  emit(cfg.out_dot, nullptr, [&](std::ostream& os) { write_dot(os, result.envelope); });
  return result.report.converged ? kOk : kNotConverged;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
  ConvergenceStudyConfig study;
  study.m = cfg.m;
  study.depths = cfg.depths;
  study.sampling = cfg.sampling;
  study.solve = cfg.solve;
  const ConvergenceSeries series = convergence_study(load_datum(cfg.datum), study);

  emit(cfg.out_csv, &out, [&](std::ostream& os) {
    os << "depth,root_value,delta\n";
    for (std::size_t i = 0; i < series.depths.size(); ++i) {
      os << series.depths[i] << ',' << format_double(series.root_values[i]) << ',';
      if (i > 0) os << format_double(series.deltas[i - 1]);
      os << '\n';
    }
  });

  const int from = cfg.nonincreasing_from.value_or(
      series.depths.size() > 1 ? series.depths[1] : series.depths[0]);
  bool all_converged = true;
  bool all_monotone = true;
  Json reports = Json::array();
  for (std::size_t i = 0; i < series.reports.size(); ++i) {
    all_converged = all_converged && series.reports[i].converged;
    all_monotone = all_monotone && series.reports[i].monotone;
    Json r = report_json(series.reports[i]);
    r["depth"] = series.depths[i];
    reports.push_back(std::move(r));
  }
  Json j;
  j["command"] = "converge";
  j["deltas_positive"] = series.deltas_positive();
  j["deltas_nonincreasing"] = series.deltas_nonincreasing(from);
  j["nonincreasing_from_depth"] = from;
  j["all_converged"] = all_converged;
  j["all_monotone"] = all_monotone;
  j["solves"] = std::move(reports);
  Json echo = config_echo(cfg);
  echo.erase("depth");
  echo["depths"] = cfg.depths;
  j["config"] = std::move(echo);
  emit(cfg.out_json, nullptr, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

void RunConfig::validate() const {
  if (m < 2) throw ConfigError("--m must be at least 2");
  if (command != "converge" && depth < 1) throw ConfigError("--depth must be at least 1");
  solve.validate(m);
  if (command == "converge" && depths.empty()) throw ConfigError("--depths is required");
  if ((command == "check" || command == "obstacle") && input.empty()) {
    throw ConfigError("--input is required for " + command);
  }
  if ((command == "obstacle") && !is_envelope(solve.variant)) {
    throw ConfigError("obstacle needs an envelope variant");
  }
}

std::vector<int> parse_depths(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != s.size()) throw ConfigError("malformed depth list '" + text + "'");
    return v;
  };
  std::vector<int> out;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const int lo = to_int(text.substr(0, range));
    const int hi = to_int(text.substr(range + 2));
    if (hi < lo) throw ConfigError("empty depth range '" + text + "'");
    for (int d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_int(tok));
  if (out.empty()) throw ConfigError("empty depth list");
  return out;
}

BoundaryDatum load_datum(const std::string& spec) {
  const auto colon = spec.find(':');
  static const std::vector<std::string> families = {"constant", "affine", "power",
                                                    "absdev", "indicator"};
  if (colon != std::string::npos &&
      std::find(families.begin(), families.end(), spec.substr(0, colon)) != families.end()) {
    return BoundaryDatum::parse(spec);
  }
  return BoundaryDatum::read_csv(std::filesystem::path(spec));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex envelopes, obstacle problems and Laplacians on regular trees",
               "treeconvex"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string variant = "convex";
  std::string sweep = "jacobi";
  std::string sampling = "point";
  std::string depths;
  int nonincreasing_from = -1;

  auto add_common = [&](CLI::App* sub, bool with_depth) {
    sub->add_option("--m", cfg.m, "Branching factor (>= 2)");
    if (with_depth) sub->add_option("--depth", cfg.depth, "Truncation depth L (>= 1)");
    sub->add_option("--variant", variant, "convex, binary, kconvex, laplacian-full, laplacian-arb");
    sub->add_option("--k", cfg.solve.k, "Subset size for the kconvex variant");
    sub->add_option("--tol", cfg.solve.tol, "Sup-norm stopping tolerance");
    sub->add_option("--max-iter", cfg.solve.max_iter, "Iteration cap");
    sub->add_option("--sweep", sweep, "jacobi or gs");
    sub->add_option("--workers", cfg.solve.workers, "Jacobi worker threads");
    sub->add_option("--out-json", cfg.out_json, "JSON report path");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve a Dirichlet problem from a boundary datum");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--datum", cfg.datum,
                        "constant:C | affine:A,B | power:P | absdev:C | indicator:LO,HI | "
                        "ref-convex:V | ref-binary:V | path to a t,g CSV");
  solve_cmd->add_option("--sampling", sampling, "point or inf:N");
  solve_cmd->add_option("--out-csv", cfg.out_csv, "Solution CSV path (default stdout)");
  solve_cmd->add_option("--out-dot", cfg.out_dot, "Graphviz output path");

  auto* check_cmd = app.add_subcommand("check", "Run convexity predicates on a function CSV");
  check_cmd->add_option("--m", cfg.m, "Branching factor (>= 2)");
  check_cmd->add_option("--depth", cfg.depth, "Truncation depth L (>= 1)");
  check_cmd->add_option("--input", cfg.input, "Function CSV")->required();
  check_cmd->add_option("--out-json", cfg.out_json, "JSON report path (default stdout)");

  auto* obstacle_cmd = app.add_subcommand("obstacle", "Convex envelope of a function on the tree");
  add_common(obstacle_cmd, true);
  obstacle_cmd->add_option("--input,--obstacle", cfg.input, "Obstacle CSV")->required();
  obstacle_cmd->add_option("--out-csv", cfg.out_csv, "Envelope CSV path (default stdout)");
  obstacle_cmd->add_option("--out-dot", cfg.out_dot, "Graphviz output path");

  auto* converge_cmd = app.add_subcommand("converge", "Root values across truncation depths");
  add_common(converge_cmd, false);
  converge_cmd->add_option("--datum", cfg.datum, "Boundary datum");
  converge_cmd->add_option("--sampling", sampling, "point or inf:N");
  converge_cmd->add_option("--depths", depths, "Depth list: 4,5,6 or 4..12")->required();
  converge_cmd->add_option("--nonincreasing-from", nonincreasing_from,
                           "First depth of the non-increasing delta check");
  converge_cmd->add_option("--out-csv", cfg.out_csv, "Series CSV path (default stdout)");

  std::vector<const char*> argv{"treeconvex"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.solve.variant = parse_variant(variant);
    cfg.solve.sweep = parse_sweep(sweep);
    cfg.sampling = SamplingMode::parse(sampling);
    if (!depths.empty()) cfg.depths = parse_depths(depths);
    if (nonincreasing_from >= 0) cfg.nonincreasing_from = nonincreasing_from;
    if (const char* budget = std::getenv("TREECONVEX_BUDGET")) {
      try {
        cfg.vertex_budget = std::stoull(budget);
      } catch (const std::exception&) {
        throw ConfigError("TREECONVEX_BUDGET must be a positive integer");
      }
    }
    cfg.validate();

    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "check") return cmd_check(cfg, out);
    if (cfg.command == "obstacle") return cmd_obstacle(cfg, out);
    return cmd_converge(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace treeconvex::cli
