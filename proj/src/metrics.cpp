#include "promptaug/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace promptaug {

namespace {

// Flat binary grid; depth 1 means a 2D image (no z neighbors).
struct Grid {
  int w = 0;
  int h = 0;
  int d = 1;
  std::vector<std::uint8_t> v;

  std::size_t size() const { return v.size(); }
  std::size_t idx(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * h + y) * w + x;
  }
};

Grid to_grid(const BinaryMask2D& m) {
  return {m.width(), m.height(), 1, {m.data().begin(), m.data().end()}};
}

Grid to_grid(const MaskVolume3D& m) {
  Grid g{m.width(), m.height(), m.slice_count(), {}};
  g.v.reserve(static_cast<std::size_t>(g.w) * g.h * g.d);
  for (const auto& s : m.slices()) g.v.insert(g.v.end(), s.data().begin(), s.data().end());
  return g;
}

void require_same(const Grid& a, const Grid& b) {
  if (a.w != b.w || a.h != b.h || a.d != b.d) {
    throw DimensionMismatch("metric inputs differ in size");
  }
}

double dice_of(const Grid& a, const Grid& b) {
  require_same(a, b);
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a.v[i];
    nb += b.v[i];
    both += a.v[i] & b.v[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

Grid boundary_of(const Grid& g) {
  Grid out{g.w, g.h, g.d, std::vector<std::uint8_t>(g.size(), 0)};
  const bool volumetric = g.d > 1;
  for (int z = 0; z < g.d; ++z) {
    for (int y = 0; y < g.h; ++y) {
      for (int x = 0; x < g.w; ++x) {
        if (!g.v[g.idx(x, y, z)]) continue;
        auto bg = [&](int nx, int ny, int nz) {
          if (nx < 0 || ny < 0 || nz < 0 || nx >= g.w || ny >= g.h || nz >= g.d) {
            return true;
          }
          return g.v[g.idx(nx, ny, nz)] == 0;
        };
        bool edge = bg(x - 1, y, z) || bg(x + 1, y, z) || bg(x, y - 1, z) ||
                    bg(x, y + 1, z);
        if (volumetric) edge = edge || bg(x, y, z - 1) || bg(x, y, z + 1);
        out.v[g.idx(x, y, z)] = edge ? 1 : 0;
      }
    }
  }
  return out;
}

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// One pass of the Felzenszwalb-Huttenlocher lower-envelope transform over a
// line of squared distances. Values stay exact integers.
void edt_line(std::vector<std::int64_t>& f, std::vector<std::int64_t>& out,
              std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFar) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    auto intersect = [&](int p) {
      return (static_cast<double>(f[q] + std::int64_t{q} * q) -
              static_cast<double>(f[p] + std::int64_t{p} * p)) /
             (2.0 * (q - p));
    };
    // z[0] is -inf, so this stops at k == 0 at the latest.
    double s = intersect(v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), kFar);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    out[q] = dq * dq + f[v[j]];
  }
}

// Exact squared Euclidean distance to the nearest set voxel of `g`.
std::vector<std::int64_t> squared_distance_transform(const Grid& g) {
  std::vector<std::int64_t> dist(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dist[i] = g.v[i] ? 0 : kFar;

  const int longest = std::max({g.w, g.h, g.d});
  std::vector<std::int64_t> line, res;
  std::vector<int> v(static_cast<std::size_t>(longest) + 1);
  std::vector<double> z(static_cast<std::size_t>(longest) + 2);

  auto run_axis = [&](int n, auto index_of, int outer_a, int outer_b) {
    line.resize(static_cast<std::size_t>(n));
    res.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < outer_a; ++a) {
      for (int b = 0; b < outer_b; ++b) {
        for (int i = 0; i < n; ++i) line[i] = dist[index_of(i, a, b)];
        edt_line(line, res, v, z);
        for (int i = 0; i < n; ++i) dist[index_of(i, a, b)] = res[i];
      }
    }
  };
  run_axis(g.w, [&](int i, int y, int zz) { return g.idx(i, y, zz); }, g.h, g.d);
  run_axis(g.h, [&](int i, int x, int zz) { return g.idx(x, i, zz); }, g.w, g.d);
  if (g.d > 1) {
    run_axis(g.d, [&](int i, int x, int y) { return g.idx(x, y, i); }, g.w, g.h);
  }
  return dist;
}

// Distances from each boundary voxel of `from` to the boundary of `to`, in
// raster order.
std::vector<double> directed_distances(const Grid& from_boundary,
                                       const Grid& to_boundary) {
  const std::vector<std::int64_t> dt = squared_distance_transform(to_boundary);
  std::vector<double> out;
  for (std::size_t i = 0; i < from_boundary.size(); ++i) {
    if (from_boundary.v[i]) out.push_back(std::sqrt(static_cast<double>(dt[i])));
  }
  return out;
}

double percentile95(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank = (95 * n + 99) / 100;  // ceil(0.95 n), 1-based
  return values[std::max<std::size_t>(rank, 1) - 1];
}

bool any(const Grid& g) {
  return std::any_of(g.v.begin(), g.v.end(), [](std::uint8_t x) { return x != 0; });
}

MetricReport report(const Grid& pred, const Grid& truth) {
  MetricReport r;
  r.dice = dice_of(pred, truth);
  if (!any(pred) || !any(truth)) {
    r.defined = false;
    r.assd = r.hd = r.hd95 = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const Grid ba = boundary_of(pred);
  const Grid bb = boundary_of(truth);
  const std::vector<double> ab = directed_distances(ba, bb);
  const std::vector<double> ba_d = directed_distances(bb, ba);
  double sum = 0.0;
  for (double x : ab) sum += x;
  for (double x : ba_d) sum += x;
  r.assd = sum / static_cast<double>(ab.size() + ba_d.size());
  r.hd = std::max(*std::max_element(ab.begin(), ab.end()),
                  *std::max_element(ba_d.begin(), ba_d.end()));
  r.hd95 = std::max(percentile95(ab), percentile95(ba_d));
  r.defined = true;
  return r;
}

MetricReport checked_report(const Grid& a, const Grid& b) {
  require_same(a, b);
  return report(a, b);
}

}  // namespace

double dice(const BinaryMask2D& a, const BinaryMask2D& b) {
  return dice_of(to_grid(a), to_grid(b));
}

double dice(const MaskVolume3D& a, const MaskVolume3D& b) {
  return dice_of(to_grid(a), to_grid(b));
}

BinaryMask2D boundary(const BinaryMask2D& mask) {
  Grid g = boundary_of(to_grid(mask));
  return BinaryMask2D(mask.width(), mask.height(), std::move(g.v));
}

MaskVolume3D boundary(const MaskVolume3D& mask) {
  const Grid g = boundary_of(to_grid(mask));
  std::vector<BinaryMask2D> slices;
  const std::size_t plane = static_cast<std::size_t>(g.w) * g.h;
  for (int k = 0; k < g.d; ++k) {
    std::vector<std::uint8_t> data(g.v.begin() + static_cast<std::ptrdiff_t>(k * plane),
                                   g.v.begin() + static_cast<std::ptrdiff_t>((k + 1) * plane));
    slices.emplace_back(g.w, g.h, std::move(data));
  }
  return MaskVolume3D(std::move(slices));
}

double assd(const BinaryMask2D& a, const BinaryMask2D& b) {
  const MetricReport r = checked_report(to_grid(a), to_grid(b));
  if (!r.defined) throw InvalidArgument("assd of an empty mask");
  return r.assd;
}

HausdorffResult hausdorff(const BinaryMask2D& a, const BinaryMask2D& b) {
  const MetricReport r = checked_report(to_grid(a), to_grid(b));
  if (!r.defined) throw InvalidArgument("hausdorff of an empty mask");
  return {r.hd, r.hd95};
}

MetricReport evaluate_masks(const BinaryMask2D& prediction,
                            const BinaryMask2D& truth) {
  return checked_report(to_grid(prediction), to_grid(truth));
}

MetricReport evaluate_masks(const MaskVolume3D& prediction,
                            const MaskVolume3D& truth) {
  return checked_report(to_grid(prediction), to_grid(truth));
}

}  // namespace promptaug
