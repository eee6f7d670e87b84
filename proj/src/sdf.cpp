#include "taskgen/sdf.hpp"

#include <algorithm>
#include <cmath>

namespace taskgen {

double SdfGrid::sample(const Vector3& p) const {
  const Vector3 local = (p - origin) / cell_size;
  const int nx = dims.x(), ny = dims.y(), nz = dims.z();
  auto clampi = [](double v, int hi) {
    return std::clamp(v, 0.0, double(hi - 1));
  };
  const double fx = clampi(local.x(), nx);
  const double fy = clampi(local.y(), ny);
  const double fz = clampi(local.z(), nz);
  const int x0 = std::min(int(fx), nx - 2 < 0 ? 0 : nx - 2);
  const int y0 = std::min(int(fy), ny - 2 < 0 ? 0 : ny - 2);
  const int z0 = std::min(int(fz), nz - 2 < 0 ? 0 : nz - 2);
  const double tx = std::clamp(fx - x0, 0.0, 1.0);
  const double ty = std::clamp(fy - y0, 0.0, 1.0);
  const double tz = std::clamp(fz - z0, 0.0, 1.0);
  const int x1 = std::min(x0 + 1, nx - 1);
  const int y1 = std::min(y0 + 1, ny - 1);
  const int z1 = std::min(z0 + 1, nz - 1);

  const double c000 = at_cell(x0, y0, z0), c100 = at_cell(x1, y0, z0);
  const double c010 = at_cell(x0, y1, z0), c110 = at_cell(x1, y1, z0);
  const double c001 = at_cell(x0, y0, z1), c101 = at_cell(x1, y0, z1);
  const double c011 = at_cell(x0, y1, z1), c111 = at_cell(x1, y1, z1);

  const double c00 = c000 * (1 - tx) + c100 * tx;
  const double c10 = c010 * (1 - tx) + c110 * tx;
  const double c01 = c001 * (1 - tx) + c101 * tx;
  const double c11 = c011 * (1 - tx) + c111 * tx;
  const double c0 = c00 * (1 - ty) + c10 * ty;
  const double c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}

Vector3 SdfGrid::gradient(const Vector3& p) const {
  const double h = 0.5 * cell_size;
  Vector3 g;
  for (int k = 0; k < 3; ++k) {
    Vector3 dp = Vector3::Zero();
    dp[k] = h;
    g[k] = (sample(p + dp) - sample(p - dp)) / (2 * h);
  }
  return g;
}

void SdfGrid::validate() const {
  if (cell_size <= 0) throw Error(ErrorCode::Validation, "cell_size must be > 0");
  if ((dims.array() <= 0).any()) {
    throw Error(ErrorCode::Validation, "grid dims must be positive");
  }
  if (values.size() != size_t(dims.x()) * dims.y() * dims.z()) {
    throw Error(ErrorCode::Validation, "grid value count does not match dims");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::Validation, "grid values must be finite");
    }
  }
}

SdfGrid build_sdf_from_geoms(const std::vector<PosedGeom>& geoms,
                             double cell_size, double padding) {
  if (cell_size <= 0) {
    throw Error(ErrorCode::Domain, "cell_size must be > 0");
  }
  SdfGrid grid;
  grid.cell_size = cell_size;

  if (geoms.empty()) {
    grid.origin = Vector3::Zero();
    grid.dims = Eigen::Vector3i(2, 2, 2);
    grid.values.assign(8, kSdfEmptySentinel);
    return grid;
  }

  Aabb bounds;
  std::vector<Aabb> boxes;
  boxes.reserve(geoms.size());
  for (const auto& pg : geoms) {
    const Aabb b = geom_aabb(pg.geom, pg.pose);
    boxes.push_back(b);
    bounds.extend(b.min);
    bounds.extend(b.max);
  }
  bounds.min -= Vector3::Constant(padding);
  bounds.max += Vector3::Constant(padding);

  grid.origin = bounds.min;
  const Vector3 span = bounds.max - bounds.min;
  grid.dims = Eigen::Vector3i(int(std::ceil(span.x() / cell_size)) + 1,
                              int(std::ceil(span.y() / cell_size)) + 1,
                              int(std::ceil(span.z() / cell_size)) + 1);
  grid.values.resize(size_t(grid.dims.x()) * grid.dims.y() * grid.dims.z());

  // Exact min distance per cell center. AABB prescreen keeps this cheap:
  // once a distance bound is known, geoms farther than it (by box distance)
  // cannot improve the minimum.
  const int nx = grid.dims.x(), ny = grid.dims.y(), nz = grid.dims.z();
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const Vector3 p = grid.origin + cell_size * Vector3(x, y, z);
        double best = kSdfEmptySentinel;
        for (size_t i = 0; i < geoms.size(); ++i) {
          const Aabb& b = boxes[i];
          const Vector3 d = (b.min - p).cwiseMax(p - b.max).cwiseMax(0.0);
          if (d.norm() >= best) continue;
          best = std::min(best, point_geom_distance(p, geoms[i].geom, geoms[i].pose));
        }
        grid.values[(size_t(z) * ny + y) * nx + x] = best;
      }
    }
  }
  return grid;
}

}  // namespace taskgen
