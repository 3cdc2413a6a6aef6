#include "crossmax/grid.hpp"

#include <cmath>
#include <limits>

namespace crossmax {

int Grid::interior_index(int node) const {
  if (!is_interior(node)) return -1;
  int ix = ix_of(node) - 1;
  if (dim == 1) return ix;
  int iy = iy_of(node) - 1;
  return iy * interior_per_axis() + ix;
}

int Grid::node_of_interior(int k) const {
  int p = interior_per_axis();
  if (k < 0 || k >= interior_count()) throw Error("node_of_interior: index out of range");
  if (dim == 1) return k + 1;
  return node_index(k % p + 1, k / p + 1);
}

std::vector<int> Grid::interior_nodes() const {
  std::vector<int> out;
  out.reserve(interior_count());
  for (int k = 0; k < interior_count(); ++k) out.push_back(node_of_interior(k));
  return out;
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min_interior() const {
  double m = std::numeric_limits<double>::infinity();
  for (int node = 0; node < size(); ++node)
    if (grid.is_interior(node)) m = std::min(m, values[node]);
  return m;
}

bool ScalarField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

// One-axis derivative: centered interior, second-order one-sided at ends.
void diff_axis(const ScalarField& f, int axis, ScalarField& out) {
  const Grid& g = f.grid;
  double h = g.h;
  int n = g.n_cells;
  auto at = [&](int ix, int iy) { return f[g.node_index(ix, iy)]; };
  int ymax = g.dim == 2 ? n : 0;
  for (int iy = 0; iy <= ymax; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      int i = axis == 0 ? ix : iy;
      double d;
      if (i == 0) {
        d = axis == 0 ? (-3 * at(0, iy) + 4 * at(1, iy) - at(2, iy)) / (2 * h)
                      : (-3 * at(ix, 0) + 4 * at(ix, 1) - at(ix, 2)) / (2 * h);
      } else if (i == n) {
        d = axis == 0 ? (3 * at(n, iy) - 4 * at(n - 1, iy) + at(n - 2, iy)) / (2 * h)
                      : (3 * at(ix, n) - 4 * at(ix, n - 1) + at(ix, n - 2)) / (2 * h);
      } else {
        d = axis == 0 ? (at(ix + 1, iy) - at(ix - 1, iy)) / (2 * h)
                      : (at(ix, iy + 1) - at(ix, iy - 1)) / (2 * h);
      }
      out[g.node_index(ix, iy)] = d;
    }
  }
}

}  // namespace

std::vector<ScalarField> gradient(const ScalarField& f) {
  std::vector<ScalarField> out;
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    ScalarField d(f.grid);
    diff_axis(f, axis, d);
    out.push_back(std::move(d));
  }
  return out;
}

static void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw Error("field arithmetic: grid mismatch");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

ScalarField operator*(double c, const ScalarField& a) {
  ScalarField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

}  // namespace crossmax
