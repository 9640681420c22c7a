#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chordalrank/io.hpp"
#include "chordalrank/problems.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace chordalrank;
namespace fs = std::filesystem;

namespace {

const std::string kBinary = CLI_BINARY_PATH;

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "chordalrank_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  std::string cmd = kBinary + " " + args + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

// <C, X> recomputed from the cost triplets against reloaded solution values.
double objective_from(const PatternVec& cost, const PatternVec& x) {
  double obj = 0.0;
  for (int k = 0; k < cost.pattern->size(); ++k) {
    if (cost.values(k) == 0.0) continue;
    auto [i, j] = cost.pattern->entries()[k];
    int idx = x.pattern->index_of(i, j);
    REQUIRE(idx >= 0);
    obj += cost.values(k) * x.values(idx) * (i == j ? 1.0 : 2.0);
  }
  return obj;
}

}  // namespace

TEST_CASE("solution json round trip reproduces the reported objective") {
  fs::path dir = work_dir();
  fs::path prob = dir / "rt_problem.json";
  fs::path sol = dir / "rt_sol.json";

  MaxcutProblem mc = gen_maxcut(6, 0.6, 11);
  save_problem(prob.string(), mc.sdp);
  REQUIRE(run("solve --problem " + prob.string() + " --out " + sol.string()) == 0);

  double reported = 0.0;
  PatternVec x = load_solution(sol.string(), &reported);
  CHECK(objective_from(mc.sdp.cost, x) == doctest::Approx(reported).epsilon(1e-12));
}

TEST_CASE("problem files survive a save/load round trip") {
  fs::path dir = work_dir();
  fs::path prob = dir / "rt2_problem.json";

  SscInstance inst = gen_ssc(2, 4, 2, 0.1, 5);
  SdpProblem p = build_ssc_sdp(inst);
  save_problem(prob.string(), p);
  SdpProblem q = load_problem(prob.string());

  CHECK(q.n == p.n);
  CHECK(q.pattern == p.pattern);
  CHECK(q.target_rank == p.target_rank);
  REQUIRE(q.constraints.size() == p.constraints.size());
  for (size_t k = 0; k < p.constraints.size(); ++k) {
    CHECK(q.constraints[k].b == p.constraints[k].b);
    CHECK((q.constraints[k].sense == p.constraints[k].sense));
    CHECK((q.constraints[k].a.values - p.constraints[k].a.values).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(q.penalty_blocks == p.penalty_blocks);
}

TEST_CASE("repeated runs with one seed write byte-identical logs") {
  fs::path dir = work_dir();
  std::string a = (dir / "det_a").string();
  std::string b = (dir / "det_b").string();

  REQUIRE(run("maxcut --n 12 --density 0.3 --seed 7 --out-prefix " + a) == 0);
  REQUIRE(run("maxcut --n 12 --density 0.3 --seed 7 --out-prefix " + b) == 0);
  CHECK(slurp(a + "_rounds.csv") == slurp(b + "_rounds.csv"));
  CHECK(slurp(a + "_summary.json") == slurp(b + "_summary.json"));

  REQUIRE(run("ssc --ns 2 --np 8 --d 2 --eps 0.1 --seed 3 --out-prefix " + a) == 0);
  REQUIRE(run("ssc --ns 2 --np 8 --d 2 --eps 0.1 --seed 3 --out-prefix " + b) == 0);
  CHECK(slurp(a + "_rounds.csv") == slurp(b + "_rounds.csv"));
  CHECK(slurp(a + "_summary.json") == slurp(b + "_summary.json"));
}

TEST_CASE("no-reweight solve writes a single-row rounds log") {
  fs::path dir = work_dir();
  fs::path prob = dir / "nr_problem.json";
  fs::path rounds = dir / "nr_rounds.csv";

  MaxcutProblem mc = gen_maxcut(5, 0.8, 2);
  save_problem(prob.string(), mc.sdp);
  REQUIRE(run("solve --problem " + prob.string() + " --no-reweight --rounds-log " +
              rounds.string()) == 0);
  std::string csv = slurp(rounds);
  CHECK(line_count(csv) == 2);  // header + one row
  CHECK(csv.rfind("round,objective,max_clique_rank,min_rank_ratio,solver_iters\n", 0) == 0);
}

TEST_CASE("malformed problem files exit 1 and name the field") {
  fs::path dir = work_dir();
  fs::path bad = dir / "bad_problem.json";
  std::ofstream(bad) << "{\"n\": 3, \"cost\": []}";
  CHECK(run("solve --problem " + bad.string()) == 1);

  std::ofstream(bad) << "{\"n\": 3, \"cost\": [[1, 1,";  // truncated
  CHECK(run("solve --problem " + bad.string()) == 1);

  CHECK(run("solve --problem " + (dir / "missing.json").string()) == 1);
}

TEST_CASE("invalid generator shapes exit 1") {
  CHECK(run("ssc --ns 5 --np 3") == 1);
  CHECK(run("maxcut --n 1") == 1);
  CHECK(run("bogus-subcommand") == 1);
}

TEST_CASE("completion tool round-trips a complete pattern and flags bad blocks") {
  fs::path dir = work_dir();
  fs::path in = dir / "comp_in.json";
  fs::path out = dir / "comp_out.json";

  // full 3x3 PSD matrix: complete pattern, completion must equal the input
  Matrix m(3, 3);
  m << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  {
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) entries.push_back({i + 1, j + 1, m(i, j)});
    std::ofstream(in) << nlohmann::json{{"n", 3}, {"entries", entries}};
  }
  REQUIRE(run("complete --in " + in.string() + " --out " + out.string()) == 0);
  nlohmann::json got = nlohmann::json::parse(slurp(out));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(got["matrix"][i][j].get<double>() == doctest::Approx(m(i, j)).epsilon(1e-12));

  // chain pattern with one indefinite clique block: exit 4
  std::ofstream(in) << R"({"n": 3, "entries": [[1,1,1.0],[1,2,3.0],[2,2,1.0],[2,3,0.5],[3,3,1.0]]})";
  CHECK(run("complete --in " + in.string() + " --out " + out.string()) == 4);
}
