#include "crossmax/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crossmax/linear_core.hpp"

namespace crossmax {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + path + it.key() + "'");
}

std::vector<std::vector<std::string>> read_matrix(const json& j, int m,
                                                  const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != m)
    throw ConfigError(name + " must be an array of " + std::to_string(m) + " rows");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw ConfigError(name + " rows must have " + std::to_string(m) + " entries");
    std::vector<std::string> r;
    for (const auto& e : row) {
      if (e.is_number())
        r.push_back(json(e).dump());
      else if (e.is_string())
        r.push_back(e.get<std::string>());
      else
        throw ConfigError(name + " entries must be numbers or expression strings");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void validate_entries(const std::vector<std::vector<std::string>>& entries,
                      const std::string& name) {
  for (const auto& row : entries)
    for (const auto& e : row) {
      try {
        parse_coeff(e);
      } catch (const ParseError& pe) {
        throw ConfigError(name + ": " + pe.what());
      }
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  require_known_keys(j, {"domain", "m", "A", "B", "K", "T", "M", "F", "k", "kappa",
                         "theorem", "tol_pos", "tol_const", "sample_density", "seed"},
                     "");

  RunConfig cfg;
  if (j.contains("domain")) {
    const json& d = j["domain"];
    if (!d.is_object()) throw ConfigError("domain must be an object");
    require_known_keys(d, {"dim", "n_cells"}, "domain.");
    if (d.contains("dim")) cfg.dim = d["dim"].get<int>();
    if (d.contains("n_cells")) cfg.n_cells = d["n_cells"].get<int>();
  }
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("domain.dim must be 1 or 2");
  if (cfg.n_cells < 4) throw ConfigError("domain.n_cells must be at least 4");

  if (j.contains("m")) cfg.m = j["m"].get<int>();
  if (cfg.m < 1) throw ConfigError("m must be positive");

  if (!j.contains("A")) throw ConfigError("missing required key 'A'");
  cfg.A = read_matrix(j["A"], cfg.m, "A");
  validate_entries(cfg.A, "A");

  if (j.contains("B")) {
    const json& b = j["B"];
    if (!b.is_array()) throw ConfigError("B must be an array of per-axis matrices");
    if (static_cast<int>(b.size()) != cfg.dim)
      throw ConfigError("B needs one matrix per axis (" + std::to_string(cfg.dim) + ")");
    for (const auto& axis : b) {
      cfg.B.push_back(read_matrix(axis, cfg.m, "B"));
      validate_entries(cfg.B.back(), "B");
    }
  }
  for (const char* key : {"K", "T", "M"}) {
    if (!j.contains(key)) continue;
    auto mat = read_matrix(j[key], cfg.m, key);
    validate_entries(mat, key);
    if (std::string(key) == "K") cfg.K = mat;
    else if (std::string(key) == "T") cfg.T = mat;
    else cfg.M = mat;
  }
  if (j.contains("F")) {
    const json& f = j["F"];
    if (!f.is_array() || static_cast<int>(f.size()) != cfg.m)
      throw ConfigError("F must be an array of m component expressions");
    for (const auto& e : f) {
      if (e.is_number()) cfg.F.push_back(json(e).dump());
      else if (e.is_string()) cfg.F.push_back(e.get<std::string>());
      else throw ConfigError("F entries must be numbers or expression strings");
    }
    for (const auto& e : cfg.F) {
      try {
        parse_coeff(e);
      } catch (const ParseError& pe) {
        throw ConfigError(std::string("F: ") + pe.what());
      }
    }
  }

  auto read_scalar_or_auto = [&](const char* key, double& value, bool& is_auto) {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (v.is_string()) {
      if (v.get<std::string>() != "auto")
        throw ConfigError(std::string(key) + " must be a number or \"auto\"");
      is_auto = true;
    } else if (v.is_number()) {
      value = v.get<double>();
    } else {
      throw ConfigError(std::string(key) + " must be a number or \"auto\"");
    }
  };
  read_scalar_or_auto("k", cfg.k, cfg.k_auto);
  read_scalar_or_auto("kappa", cfg.kappa, cfg.kappa_auto);

  if (j.contains("theorem")) cfg.theorem = j["theorem"].get<std::string>();
  static const std::set<std::string> theorems = {
      "lopez", "maxmat", "matmaxprinciple", "GenMPMat", "GenMPMatT",
      "GenMPMatTKR", "GenMPMatTKRnew"};
  if (!theorems.count(cfg.theorem))
    throw ConfigError("unknown theorem '" + cfg.theorem + "'");

  if (j.contains("tol_pos")) cfg.tol_pos = j["tol_pos"].get<double>();
  if (j.contains("tol_const")) cfg.tol_const = j["tol_const"].get<double>();
  if (j.contains("sample_density")) cfg.sample_density = j["sample_density"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
  if (!(cfg.tol_pos > 0) || !(cfg.tol_const > 0))
    throw ConfigError("tolerances must be positive");
  if (cfg.sample_density < 1) throw ConfigError("sample_density must be positive");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Grid make_grid(const RunConfig& cfg) { return Grid(cfg.dim, cfg.n_cells); }

MatrixField make_matrix_field(const std::vector<std::vector<std::string>>& entries,
                              const Grid& grid) {
  int m = static_cast<int>(entries.size());
  MatrixField out(m, grid);
  const ScalarField* phi = nullptr;
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj) {
      CoeffExpr e = parse_coeff(entries[i][jj]);
      if (e.uses_phi1() && !phi) phi = &laplace_phi1(grid);
      out.entry(i, jj) = eval_field(e, grid, phi);
    }
  return out;
}

VectorField make_vector_field(const std::vector<std::string>& entries, const Grid& grid) {
  int m = static_cast<int>(entries.size());
  VectorField out(m, grid);
  const ScalarField* phi = nullptr;
  for (int i = 0; i < m; ++i) {
    CoeffExpr e = parse_coeff(entries[i]);
    if (e.uses_phi1() && !phi) phi = &laplace_phi1(grid);
    out[i] = eval_field(e, grid, phi);
  }
  return out;
}

Problem make_problem(const RunConfig& cfg) {
  Problem p;
  p.grid = make_grid(cfg);
  p.m = cfg.m;
  p.A = make_matrix_field(cfg.A, p.grid);
  for (const auto& axis : cfg.B) p.B_axes.push_back(make_matrix_field(axis, p.grid));
  p.K = cfg.K.empty() ? MatrixField(cfg.m, p.grid) : make_matrix_field(cfg.K, p.grid);
  p.k = cfg.k;
  if (cfg.F.empty()) {
    const ScalarField& phi = laplace_phi1(p.grid);
    p.F = VectorField(cfg.m, p.grid);
    for (int c = 0; c < cfg.m; ++c) p.F[c] = phi;
  } else {
    p.F = make_vector_field(cfg.F, p.grid);
  }
  return p;
}

}  // namespace crossmax
