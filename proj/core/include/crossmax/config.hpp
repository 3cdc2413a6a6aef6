#pragma once

#include "crossmax/discrete_operator.hpp"
#include "crossmax/expr.hpp"

namespace crossmax {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Parsed run configuration. Matrix entries are expression strings in the
/// coefficient language; everything is validated before any compute.
struct RunConfig {
  int dim = 1;
  int n_cells = 32;
  int m = 1;
  std::vector<std::vector<std::string>> A;                // m x m, required
  std::vector<std::vector<std::vector<std::string>>> B;   // per axis, optional
  std::vector<std::vector<std::string>> K;                // optional (zero)
  std::vector<std::vector<std::string>> T;                // optional
  std::vector<std::vector<std::string>> M;                // optional
  std::vector<std::string> F;                             // optional (phi1)
  double k = 0.0;
  bool k_auto = false;
  double kappa = 0.0;
  bool kappa_auto = false;
  std::string theorem = "GenMPMat";
  double tol_pos = 1e-12;
  double tol_const = 1e-8;
  int sample_density = 8;
  unsigned seed = 42;
};

/// Parses a JSON document; unknown keys are rejected with their path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

Grid make_grid(const RunConfig& cfg);

/// Evaluates an entry table into a field; phi1 refers to the cached principal
/// eigenfunction of the grid's Laplacian.
MatrixField make_matrix_field(const std::vector<std::vector<std::string>>& entries,
                              const Grid& grid);
VectorField make_vector_field(const std::vector<std::string>& entries, const Grid& grid);

/// Materializes the PDE data (grid, A, B, K, k, F) from a config.
Problem make_problem(const RunConfig& cfg);

}  // namespace crossmax
