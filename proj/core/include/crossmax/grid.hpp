#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace crossmax {

/// Error type for all precondition and structural failures in the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Uniform grid on (0,1) or (0,1)^2 with nodes at multiples of h = 1/n_cells.
/// Node ordering is lexicographic by (y,x); boundary nodes are included in
/// field storage but eliminated from assembled operators.
struct Grid {
  int dim = 1;
  int n_cells = 4;
  double h = 0.25;

  Grid() = default;
  Grid(int dimension, int cells) : dim(dimension), n_cells(cells), h(1.0 / cells) {
    if (dim != 1 && dim != 2) throw Error("Grid: dim must be 1 or 2");
    if (n_cells < 4) throw Error("Grid: n_cells must be >= 4");
  }

  bool operator==(const Grid&) const = default;

  int nodes_per_axis() const { return n_cells + 1; }
  int node_count() const {
    int p = nodes_per_axis();
    return dim == 1 ? p : p * p;
  }
  int interior_per_axis() const { return n_cells - 1; }
  int interior_count() const {
    int p = interior_per_axis();
    return dim == 1 ? p : p * p;
  }

  int node_index(int ix, int iy = 0) const {
    return dim == 1 ? ix : iy * nodes_per_axis() + ix;
  }
  int ix_of(int node) const { return dim == 1 ? node : node % nodes_per_axis(); }
  int iy_of(int node) const { return dim == 1 ? 0 : node / nodes_per_axis(); }
  double x_of(int node) const { return ix_of(node) * h; }
  double y_of(int node) const { return iy_of(node) * h; }

  bool is_interior(int node) const {
    int ix = ix_of(node), iy = iy_of(node);
    bool in = ix > 0 && ix < n_cells;
    if (dim == 2) in = in && iy > 0 && iy < n_cells;
    return in;
  }

  /// Index of a node among interior nodes (lexicographic), -1 on the boundary.
  int interior_index(int node) const;
  /// Inverse of interior_index.
  int node_of_interior(int k) const;
  std::vector<int> interior_nodes() const;

  /// Minimum number of grid edges to reach the boundary.
  int boundary_distance(int node) const {
    int ix = ix_of(node);
    int d = std::min(ix, n_cells - ix);
    if (dim == 2) {
      int iy = iy_of(node);
      d = std::min(d, std::min(iy, n_cells - iy));
    }
    return d;
  }
};

/// Nodal scalar values over all grid nodes (boundary included).
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.node_count(), fill) {}

  double& operator[](int node) { return values[node]; }
  double operator[](int node) const { return values[node]; }
  int size() const { return static_cast<int>(values.size()); }

  double max_abs() const;
  double min_interior() const;
  bool all_finite() const;
};

/// m-component vector field; component-major blocking.
struct VectorField {
  std::vector<ScalarField> components;

  VectorField() = default;
  VectorField(int m, const Grid& g) : components(m, ScalarField(g)) {}
  int m() const { return static_cast<int>(components.size()); }
  ScalarField& operator[](int i) { return components[i]; }
  const ScalarField& operator[](int i) const { return components[i]; }
};

/// Second-order gradient: centered in the interior, one-sided at the boundary.
/// Returns one field per axis.
std::vector<ScalarField> gradient(const ScalarField& f);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);

}  // namespace crossmax
