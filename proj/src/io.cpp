#include "chordalrank/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace chordalrank {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

// json's own accessor errors carry the key, but not which file or which
// element of an array; wrap every field read with that context.
template <typename T>
T field_as(const json& j, const std::string& path, const std::string& field) {
  if (!j.contains(field)) throw std::runtime_error(path + ": missing field \"" + field + "\"");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw std::runtime_error(path + ": field \"" + field + "\" has the wrong type");
  }
}

// [i, j, v] with 1 <= i <= j <= n, converted to 0-based.
std::vector<Triplet> read_triplets(const json& arr, const std::string& path,
                                   const std::string& field, int n) {
  if (!arr.is_array()) throw std::runtime_error(path + ": field \"" + field + "\" must be an array");
  std::vector<Triplet> out;
  for (const json& t : arr) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
        !t[1].is_number_integer() || !t[2].is_number())
      throw std::runtime_error(path + ": field \"" + field + "\" entries must be [i, j, value]");
    int i = t[0].get<int>();
    int j = t[1].get<int>();
    if (i < 1 || j < i || j > n)
      throw std::runtime_error(path + ": field \"" + field + "\" has an index outside 1 <= i <= j <= " +
                               std::to_string(n));
    out.push_back({i - 1, j - 1, t[2].get<double>()});
  }
  return out;
}

json triplet_json(int i, int j, double v) { return json::array({i + 1, j + 1, v}); }

}  // namespace

Graph load_graph(const std::string& path) {
  json j = read_json(path);
  int n = field_as<int>(j, path, "n");
  if (n < 1) throw std::runtime_error(path + ": field \"n\" must be positive");
  if (!j.contains("edges")) throw std::runtime_error(path + ": missing field \"edges\"");
  std::vector<std::pair<int, int>> edges;
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw std::runtime_error(path + ": field \"edges\" entries must be [i, j]");
    int u = e[0].get<int>();
    int v = e[1].get<int>();
    if (u < 1 || v <= u || v > n)
      throw std::runtime_error(path + ": field \"edges\" has an entry outside 1 <= i < j <= " +
                               std::to_string(n));
    edges.push_back({u - 1, v - 1});
  }
  return Graph(n, std::move(edges));
}

void save_graph(const std::string& path, const Graph& g) {
  json edges = json::array();
  for (auto [i, j] : g.edges()) edges.push_back(json::array({i + 1, j + 1}));
  write_json(path, json{{"n", g.num_vertices()}, {"edges", std::move(edges)}});
}

SdpProblem load_problem(const std::string& path) {
  json j = read_json(path);
  SdpProblem p;
  p.n = field_as<int>(j, path, "n");
  if (p.n < 1) throw std::runtime_error(path + ": field \"n\" must be positive");

  if (!j.contains("cost")) throw std::runtime_error(path + ": missing field \"cost\"");
  std::vector<Triplet> cost = read_triplets(j.at("cost"), path, "cost", p.n);

  if (!j.contains("constraints")) throw std::runtime_error(path + ": missing field \"constraints\"");
  std::vector<std::vector<Triplet>> rows;
  std::vector<double> rhs;
  std::vector<Sense> senses;
  for (const json& c : j.at("constraints")) {
    std::string where = "constraints[" + std::to_string(rows.size()) + "]";
    if (!c.is_object()) throw std::runtime_error(path + ": " + where + " must be an object");
    if (!c.contains("a")) throw std::runtime_error(path + ": " + where + " is missing field \"a\"");
    rows.push_back(read_triplets(c.at("a"), path, where + ".a", p.n));
    rhs.push_back(field_as<double>(c, path, "b"));
    std::string sense = field_as<std::string>(c, path, "sense");
    if (sense == "eq")
      senses.push_back(Sense::Eq);
    else if (sense == "le")
      senses.push_back(Sense::Le);
    else
      throw std::runtime_error(path + ": " + where + ".sense must be \"eq\" or \"le\", got \"" +
                               sense + "\"");
  }

  p.target_rank = j.contains("target_rank") ? field_as<int>(j, path, "target_rank") : 1;

  if (j.contains("penalty_blocks")) {
    for (const json& b : j.at("penalty_blocks")) {
      std::string where = "penalty_blocks[" + std::to_string(p.penalty_blocks.size()) + "]";
      if (!b.is_array() || b.empty())
        throw std::runtime_error(path + ": " + where + " must be a nonempty vertex list");
      Clique clique;
      for (const json& v : b) {
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > p.n)
          throw std::runtime_error(path + ": " + where + " has a vertex outside 1..=" +
                                   std::to_string(p.n));
        clique.push_back(v.get<int>() - 1);
      }
      std::sort(clique.begin(), clique.end());
      clique.erase(std::unique(clique.begin(), clique.end()), clique.end());
      p.penalty_blocks.push_back(std::move(clique));
    }
  }

  // Pattern = union of all supports, plus a clique over every penalty block
  // so the blocks stay valid after chordal extension.
  Graph base = aggregate_pattern(p.n, cost, rows);
  std::vector<std::pair<int, int>> edges = base.edges();
  for (const Clique& b : p.penalty_blocks)
    for (size_t u = 0; u < b.size(); ++u)
      for (size_t v = u + 1; v < b.size(); ++v) edges.push_back({b[u], b[v]});
  p.pattern = Graph(p.n, std::move(edges));

  PatternPtr pat = SymPattern::make(p.pattern);
  p.cost = vec_from_triplets(pat, cost);
  for (size_t k = 0; k < rows.size(); ++k)
    p.constraints.push_back({vec_from_triplets(pat, rows[k]), rhs[k], senses[k]});
  return p;
}

void save_problem(const std::string& path, const SdpProblem& p) {
  json j;
  j["n"] = p.n;

  // One triplet per pattern entry, zeros included: the pattern itself must
  // survive the round trip, and entry positions are what carry it.
  json cost = json::array();
  for (int k = 0; k < p.cost.pattern->size(); ++k) {
    auto [i, jj] = p.cost.pattern->entries()[k];
    cost.push_back(triplet_json(i, jj, p.cost.values(k)));
  }
  j["cost"] = std::move(cost);

  json constraints = json::array();
  for (const Constraint& c : p.constraints) {
    json a = json::array();
    for (int k = 0; k < c.a.pattern->size(); ++k) {
      if (c.a.values(k) == 0.0) continue;
      auto [i, jj] = c.a.pattern->entries()[k];
      a.push_back(triplet_json(i, jj, c.a.values(k)));
    }
    constraints.push_back(
        json{{"a", std::move(a)}, {"b", c.b}, {"sense", c.sense == Sense::Eq ? "eq" : "le"}});
  }
  j["constraints"] = std::move(constraints);

  j["target_rank"] = p.target_rank;
  if (!p.penalty_blocks.empty()) {
    json blocks = json::array();
    for (const Clique& b : p.penalty_blocks) {
      json verts = json::array();
      for (int v : b) verts.push_back(v + 1);
      blocks.push_back(std::move(verts));
    }
    j["penalty_blocks"] = std::move(blocks);
  }
  write_json(path, j);
}

SscInstance load_ssc_instance(const std::string& path) {
  json j = read_json(path);
  SscInstance inst;
  inst.D = field_as<int>(j, path, "D");
  inst.Ns = field_as<int>(j, path, "Ns");
  inst.Np = field_as<int>(j, path, "Np");
  inst.eps = field_as<double>(j, path, "eps");
  inst.seed = field_as<std::uint64_t>(j, path, "seed");
  if (inst.D < 2 || inst.Ns < 1 || inst.Np < inst.Ns)
    throw std::runtime_error(path + ": fields \"D\", \"Ns\", \"Np\" describe an invalid shape");

  auto read_vectors = [&](const std::string& field, int count) {
    if (!j.contains(field)) throw std::runtime_error(path + ": missing field \"" + field + "\"");
    std::vector<Vector> out;
    for (const json& row : j.at(field)) {
      if (!row.is_array() || static_cast<int>(row.size()) != inst.D)
        throw std::runtime_error(path + ": field \"" + field + "\" rows must have D entries");
      Vector v(inst.D);
      for (int d = 0; d < inst.D; ++d) {
        if (!row[d].is_number())
          throw std::runtime_error(path + ": field \"" + field + "\" has a non-numeric entry");
        v(d) = row[d].get<double>();
      }
      out.push_back(std::move(v));
    }
    if (static_cast<int>(out.size()) != count)
      throw std::runtime_error(path + ": field \"" + field + "\" must have " +
                               std::to_string(count) + " rows");
    return out;
  };
  inst.points = read_vectors("points", inst.Np);
  inst.normals = read_vectors("normals", inst.Ns);

  if (!j.contains("labels")) throw std::runtime_error(path + ": missing field \"labels\"");
  for (const json& l : j.at("labels")) {
    if (!l.is_number_integer() || l.get<int>() < 1 || l.get<int>() > inst.Ns)
      throw std::runtime_error(path + ": field \"labels\" entries must lie in 1..=" +
                               std::to_string(inst.Ns));
    inst.labels.push_back(l.get<int>() - 1);
  }
  if (static_cast<int>(inst.labels.size()) != inst.Np)
    throw std::runtime_error(path + ": field \"labels\" must have Np entries");
  return inst;
}

void save_ssc_instance(const std::string& path, const SscInstance& inst) {
  auto vectors_json = [](const std::vector<Vector>& vs) {
    json out = json::array();
    for (const Vector& v : vs) {
      json row = json::array();
      for (int d = 0; d < v.size(); ++d) row.push_back(v(d));
      out.push_back(std::move(row));
    }
    return out;
  };
  json labels = json::array();
  for (int l : inst.labels) labels.push_back(l + 1);
  write_json(path, json{{"D", inst.D},
                        {"Ns", inst.Ns},
                        {"Np", inst.Np},
                        {"eps", inst.eps},
                        {"seed", inst.seed},
                        {"points", vectors_json(inst.points)},
                        {"normals", vectors_json(inst.normals)},
                        {"labels", std::move(labels)}});
}

PatternVec load_pattern_values(const std::string& path) {
  json j = read_json(path);
  int n = field_as<int>(j, path, "n");
  if (n < 1) throw std::runtime_error(path + ": field \"n\" must be positive");
  if (!j.contains("entries")) throw std::runtime_error(path + ": missing field \"entries\"");
  std::vector<Triplet> ts = read_triplets(j.at("entries"), path, "entries", n);

  std::vector<std::pair<int, int>> edges;
  for (const Triplet& t : ts)
    if (t.i != t.j) edges.push_back({t.i, t.j});
  return vec_from_triplets(SymPattern::make(Graph(n, std::move(edges))), ts);
}

namespace {

json entries_json(const PatternVec& x) {
  json out = json::array();
  for (int k = 0; k < x.pattern->size(); ++k) {
    auto [i, j] = x.pattern->entries()[k];
    out.push_back(triplet_json(i, j, x.values(k)));
  }
  return out;
}

}  // namespace

void save_pattern_values(const std::string& path, const PatternVec& x) {
  write_json(path, json{{"n", x.pattern->n()}, {"entries", entries_json(x)}});
}

void save_solution(const std::string& path, const Solution& sol) {
  const char* status = sol.status == SolveStatus::Converged ? "converged"
                       : sol.status == SolveStatus::MaxIter ? "max_iter"
                                                            : "infeasible_suspected";
  write_json(path, json{{"n", sol.x.pattern->n()},
                        {"objective", sol.objective},
                        {"status", status},
                        {"iterations", sol.iterations},
                        {"primal_res", sol.primal_res},
                        {"dual_res", sol.dual_res},
                        {"entries", entries_json(sol.x)}});
}

PatternVec load_solution(const std::string& path, double* objective) {
  json j = read_json(path);
  if (objective != nullptr) *objective = field_as<double>(j, path, "objective");
  int n = field_as<int>(j, path, "n");
  if (n < 1) throw std::runtime_error(path + ": field \"n\" must be positive");
  if (!j.contains("entries")) throw std::runtime_error(path + ": missing field \"entries\"");
  std::vector<Triplet> ts = read_triplets(j.at("entries"), path, "entries", n);
  std::vector<std::pair<int, int>> edges;
  for (const Triplet& t : ts)
    if (t.i != t.j) edges.push_back({t.i, t.j});
  return vec_from_triplets(SymPattern::make(Graph(n, std::move(edges))), ts);
}

void save_dense_matrix(const std::string& path, const Matrix& m, int rank) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  write_json(path, json{{"n", static_cast<int>(m.rows())}, {"rank", rank}, {"matrix", std::move(rows)}});
}

namespace {

std::string csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_iteration_csv(const std::string& path, const std::vector<IterationRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "iter,objective,primal_res,dual_res,rho,max_clique_rank\n";
  for (const IterationRecord& r : trace)
    out << r.iter << ',' << csv_double(r.objective) << ',' << csv_double(r.primal_res) << ','
        << csv_double(r.dual_res) << ',' << csv_double(r.rho) << ',' << r.max_clique_rank << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_rounds_csv(const std::string& path, const std::vector<RoundRecord>& rounds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "round,objective,max_clique_rank,min_rank_ratio,solver_iters\n";
  for (const RoundRecord& r : rounds)
    out << r.round << ',' << csv_double(r.objective) << ',' << r.max_clique_rank << ','
        << csv_double(r.min_rank_ratio) << ',' << r.solver_iters << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace chordalrank
