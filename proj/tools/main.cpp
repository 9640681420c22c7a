#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chordalrank/admm.hpp"
#include "chordalrank/completion.hpp"
#include "chordalrank/graph.hpp"
#include "chordalrank/io.hpp"
#include "chordalrank/pattern.hpp"
#include "chordalrank/problems.hpp"
#include "chordalrank/reweight.hpp"
#include "json.hpp"

namespace {

using namespace chordalrank;

constexpr int kExitParse = 1;
constexpr int kExitSolver = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNotCompletable = 4;
constexpr int kRoundingTrials = 100;
constexpr int kSscAttempts = 5;

struct SolverFlags {
  AdmmOptions admm;
  ReweightOptions reweight;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--rho", f.admm.rho, "initial ADMM penalty")->capture_default_str();
  cmd->add_option("--tol-abs", f.admm.eps_abs, "absolute residual tolerance")
      ->capture_default_str();
  cmd->add_option("--tol-rel", f.admm.eps_rel, "relative residual tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", f.admm.max_iter, "ADMM iteration cap per solve")
      ->capture_default_str();
  cmd->add_option("--delta", f.reweight.delta, "reweighting inverse regularizer")
      ->capture_default_str();
  cmd->add_option("--ratio", f.reweight.ratio_target, "rank ratio counted as rank one")
      ->capture_default_str();
  cmd->add_option("--rounds", f.reweight.max_outer, "reweighting round cap")
      ->capture_default_str();
}

int status_exit(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return 0;
    case SolveStatus::InfeasibleSuspected:
      return kExitInfeasible;
    default:
      return kExitSolver;
  }
}

double min_penalty_ratio(const DecomposedProblem& dec, const PatternVec& x) {
  double worst = 1.0;
  for (const SelectorMap& sel : dec.penalty_selectors)
    worst = std::min(worst, rank_ratio(extract_block(x, sel)));
  return worst;
}

int max_clique_rank(const Solution& sol) {
  int r = 0;
  for (int v : sol.clique_ranks) r = std::max(r, v);
  return r;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << header << '\n';
  for (const std::string& row : rows) out << row << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int cmd_solve(const std::string& problem_path, const std::string& out_path,
              const std::string& log_path, const std::string& rounds_path, bool no_reweight,
              SolverFlags f) {
  SdpProblem p = load_problem(problem_path);
  AdmmSolver solver(decompose(p), f.admm);

  ReweightResult result;
  if (no_reweight) {
    Solution sol = solver.solve();
    RoundRecord r0;
    r0.round = 0;
    r0.objective = sol.objective;
    r0.max_clique_rank = max_clique_rank(sol);
    r0.min_rank_ratio = min_penalty_ratio(solver.decomposition(), sol.x);
    r0.solver_iters = sol.iterations;
    result.rounds.push_back(r0);
    result.trace = sol.trace;
    result.solution = std::move(sol);
  } else {
    result = run_reweighted(solver, f.reweight);
  }

  if (!out_path.empty()) save_solution(out_path, result.solution);
  if (!log_path.empty()) write_iteration_csv(log_path, result.trace);
  if (!rounds_path.empty()) write_rounds_csv(rounds_path, result.rounds);
  return status_exit(result.solution.status);
}

int cmd_maxcut(int n, double density, std::uint64_t seed, const std::string& prefix,
               SolverFlags f) {
  MaxcutProblem mc = gen_maxcut(n, density, seed);
  AdmmSolver solver(decompose(mc.sdp), f.admm);

  // Plain relaxation first: its optimum is the SDP bound on the cut, and its
  // clique ranks are the starting point the reweighting must not exceed.
  Solution plain = solver.solve();
  double sdp_bound = -plain.objective;
  int initial_rank = max_clique_rank(plain);

  ReweightResult rw = run_reweighted(solver, f.reweight);
  int final_rank = rw.rounds.back().max_clique_rank;
  CutResult cut = round_maxcut(mc.graph, rw.solution.x, seed, kRoundingTrials);

  std::vector<std::string> rows;
  rows.push_back("0," + std::to_string(initial_rank) + ',' + num(plain.objective));
  for (const RoundRecord& r : rw.rounds)
    rows.push_back(std::to_string(r.round) + ',' + std::to_string(r.max_clique_rank) + ',' +
                   num(r.objective));
  write_csv(prefix + "_rounds.csv", "round,max_clique_rank,objective", rows);

  const CliqueTree& tree = solver.decomposition().tree;
  size_t max_clique_size = 0;
  for (const Clique& c : tree.cliques) max_clique_size = std::max(max_clique_size, c.size());
  nlohmann::json summary{{"clique_count", tree.cliques.size()},
                         {"max_clique_size", max_clique_size},
                         {"initial_max_rank", initial_rank},
                         {"final_max_rank", final_rank},
                         {"cut_value", cut.value},
                         {"sdp_bound", sdp_bound}};
  std::ofstream out(prefix + "_summary.json");
  if (!out) throw std::runtime_error(prefix + "_summary.json: cannot open for writing");
  out << summary.dump(2) << '\n';

  int code = status_exit(plain.status);
  if (code == 0) code = status_exit(rw.solution.status);
  return code;
}

int cmd_ssc(int ns, int np, int d, double eps, std::uint64_t seed, const std::string& prefix,
            SolverFlags f) {
  SscInstance inst = gen_ssc(ns, np, d, eps, seed);
  SscSolveResult r = solve_ssc(inst, f.reweight, kSscAttempts, seed);
  LabelMatching match = best_label_matching(r.estimate.labels, inst.labels);

  std::vector<std::string> rows;
  for (const RoundRecord& rec : r.reweight.rounds)
    rows.push_back(std::to_string(rec.round) + ',' + num(rec.min_rank_ratio) + ',' +
                   num(rec.objective));
  write_csv(prefix + "_rounds.csv", "round,min_rank_ratio,objective", rows);

  nlohmann::json angles = nlohmann::json::array();
  for (int i = 0; i < inst.Ns; ++i)
    angles.push_back(r.estimate.degenerate[i]
                         ? 90.0
                         : line_angle_degrees(r.estimate.normals[i],
                                              inst.normals[match.permutation[i]]));
  nlohmann::json summary{{"accuracy", match.accuracy},
                         {"normal_angles", std::move(angles)},
                         {"rounds_used", r.reweight.rounds.size()},
                         {"attempts", r.attempts}};
  std::ofstream out(prefix + "_summary.json");
  if (!out) throw std::runtime_error(prefix + "_summary.json: cannot open for writing");
  out << summary.dump(2) << '\n';

  return status_exit(r.reweight.solution.status);
}

int cmd_complete(const std::string& in_path, const std::string& out_path, double tol) {
  PatternVec x = load_pattern_values(in_path);

  std::vector<std::pair<int, int>> off_diag;
  for (auto [i, j] : x.pattern->entries())
    if (i != j) off_diag.push_back({i, j});
  Graph pat(x.pattern->n(), off_diag);
  EliminationOrder order;
  if (!is_chordal(pat, &order))
    throw std::runtime_error(in_path + ": pattern is not chordal; complete works on chordal patterns");
  std::vector<Clique> cliques = maximal_cliques(pat, order);

  CompletabilityReport report = check_completable(x, cliques, tol);
  if (!report.completable) {
    std::fprintf(stderr, "input values admit no PSD completion; per-clique minimum eigenvalues:\n");
    for (size_t k = 0; k < cliques.size(); ++k) {
      std::string verts;
      for (int v : cliques[k]) verts += (verts.empty() ? "" : ", ") + std::to_string(v + 1);
      std::fprintf(stderr, "  clique [%s]: min eigenvalue %.6g\n", verts.c_str(),
                   report.min_eigenvalues[k]);
    }
    return kExitNotCompletable;
  }

  Matrix completed = min_rank_complete(x, clique_tree(cliques), 1e-6, tol);
  save_dense_matrix(out_path, completed, numerical_rank(completed, 1e-6));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse SDP solving with chordal decomposition and rank reweighting"};
  app.require_subcommand(1);

  // solve
  std::string problem_path, sol_path, log_path, rounds_path;
  bool no_reweight = false;
  SolverFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem file with rank reweighting");
  solve->add_option("--problem", problem_path, "problem JSON file")->required();
  solve->add_option("--out", sol_path, "solution JSON output");
  solve->add_option("--log", log_path, "per-iteration CSV output");
  solve->add_option("--rounds-log", rounds_path, "per-round CSV output");
  solve->add_flag("--no-reweight", no_reweight, "single convex solve, no reweighting");
  add_solver_flags(solve, solve_flags);

  // maxcut
  int mc_n = 50;
  double mc_density = 0.08;
  std::uint64_t mc_seed = 1;
  std::string mc_prefix = "maxcut";
  SolverFlags mc_flags;
  CLI::App* maxcut = app.add_subcommand("maxcut", "random maxcut experiment");
  maxcut->add_option("--n", mc_n, "vertex count")->capture_default_str();
  maxcut->add_option("--density", mc_density, "edge probability")->capture_default_str();
  maxcut->add_option("--seed", mc_seed, "generator seed")->capture_default_str();
  maxcut->add_option("--out-prefix", mc_prefix, "output file prefix")->capture_default_str();
  add_solver_flags(maxcut, mc_flags);

  // ssc
  int ssc_ns = 2, ssc_np = 20, ssc_d = 2;
  double ssc_eps = 0.1;
  std::uint64_t ssc_seed = 1;
  std::string ssc_prefix = "ssc";
  SolverFlags ssc_flags;
  CLI::App* ssc = app.add_subcommand("ssc", "subspace clustering experiment");
  ssc->add_option("--ns", ssc_ns, "subspace count")->capture_default_str();
  ssc->add_option("--np", ssc_np, "point count")->capture_default_str();
  ssc->add_option("--d", ssc_d, "ambient dimension")->capture_default_str();
  ssc->add_option("--eps", ssc_eps, "membership tolerance")->capture_default_str();
  ssc->add_option("--seed", ssc_seed, "generator seed")->capture_default_str();
  ssc->add_option("--out-prefix", ssc_prefix, "output file prefix")->capture_default_str();
  add_solver_flags(ssc, ssc_flags);

  // complete
  std::string comp_in, comp_out;
  double comp_tol = 1e-9;
  CLI::App* complete = app.add_subcommand("complete", "minimum-rank PSD completion");
  complete->add_option("--in", comp_in, "pattern values JSON file")->required();
  complete->add_option("--out", comp_out, "dense completion JSON output")->required();
  complete->add_option("--tol", comp_tol, "relative PSD tolerance per clique block")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (solve->parsed())
      return cmd_solve(problem_path, sol_path, log_path, rounds_path, no_reweight, solve_flags);
    if (maxcut->parsed()) return cmd_maxcut(mc_n, mc_density, mc_seed, mc_prefix, mc_flags);
    if (ssc->parsed())
      return cmd_ssc(ssc_ns, ssc_np, ssc_d, ssc_eps, ssc_seed, ssc_prefix, ssc_flags);
    if (complete->parsed()) return cmd_complete(comp_in, comp_out, comp_tol);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\nrun with --help for usage\n", e.what());
    return kExitParse;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  }
  return 0;
}
