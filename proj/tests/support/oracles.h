#ifndef PROMPTAUG_TESTS_SUPPORT_ORACLES_H_
#define PROMPTAUG_TESTS_SUPPORT_ORACLES_H_

// Random generators and slow reference implementations shared by the unit
// tests and the acceptance runner. Everything here is written from the
// definitions directly and deliberately shares no code with src/.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "promptaug/core.h"
#include "promptaug/rng.h"

namespace promptaug::testing {

inline BinaryMask2D random_mask(Rng& rng, int w, int h, double density) {
  BinaryMask2D m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, rng.uniform() < density);
  return m;
}

inline GrayImage2D random_image(Rng& rng, int w, int h) {
  GrayImage2D img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.set(i, static_cast<std::uint8_t>(rng.uniform_int(0, 255)));
  }
  return img;
}

inline BinaryMask2D mask_from(int w, int h, std::vector<int> v) {
  return BinaryMask2D(w, h, std::vector<std::uint8_t>(v.begin(), v.end()));
}

// --- ensemble -------------------------------------------------------------

inline std::vector<double> oracle_frequency(const std::vector<BinaryMask2D>& masks) {
  const auto& first = masks.front();
  std::vector<double> f(first.size());
  for (int y = 0; y < first.height(); ++y) {
    for (int x = 0; x < first.width(); ++x) {
      int votes = 0;
      for (const auto& m : masks) votes += m.at(x, y) ? 1 : 0;
      f[first.index(x, y)] = double(votes) / double(masks.size());
    }
  }
  return f;
}

inline double oracle_variance(double f) { return f - f * f; }

inline double oracle_entropy(double f, double eps) {
  double v = -(f * std::log(f + eps) + (1.0 - f) * std::log(1.0 - f + eps)) / 2.0;
  return v < 0.0 ? 0.0 : v;
}

// --- metrics --------------------------------------------------------------

struct OraclePoint {
  int x, y;
};

inline std::vector<OraclePoint> oracle_boundary(const BinaryMask2D& m) {
  std::vector<OraclePoint> out;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      bool edge = false;
      for (int k = 0; k < 4; ++k) {
        if (!m.in_bounds(nx[k], ny[k]) || !m.at(nx[k], ny[k])) edge = true;
      }
      if (edge) out.push_back({x, y});
    }
  }
  return out;
}

// For each point of `from`, the distance to the nearest point of `to`.
inline std::vector<double> oracle_directed(const std::vector<OraclePoint>& from,
                                           const std::vector<OraclePoint>& to) {
  std::vector<double> d;
  for (const auto& p : from) {
    long best = std::numeric_limits<long>::max();
    for (const auto& q : to) {
      const long dx = p.x - q.x, dy = p.y - q.y;
      best = std::min(best, dx * dx + dy * dy);
    }
    d.push_back(std::sqrt(double(best)));
  }
  return d;
}

inline double oracle_percentile95(std::vector<double> d) {
  std::sort(d.begin(), d.end());
  // nearest rank: smallest k with k/n >= 95/100, searched in integers
  std::size_t k = 1;
  while (100 * k < 95 * d.size()) ++k;
  return d[k - 1];
}

struct OracleMetrics {
  double dice, assd, hd, hd95;
  bool defined;
};

inline OracleMetrics oracle_metrics(const BinaryMask2D& a, const BinaryMask2D& b) {
  long na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a.test(i);
    nb += b.test(i);
    both += a.test(i) && b.test(i);
  }
  OracleMetrics r{};
  r.dice = (na + nb == 0) ? 1.0 : 2.0 * double(both) / double(na + nb);
  if (na == 0 || nb == 0) return r;
  const auto ba = oracle_boundary(a), bb = oracle_boundary(b);
  const auto dab = oracle_directed(ba, bb), dba = oracle_directed(bb, ba);
  double sum = 0, hd = 0;
  for (double v : dab) sum += v, hd = std::max(hd, v);
  for (double v : dba) sum += v, hd = std::max(hd, v);
  r.assd = sum / double(dab.size() + dba.size());
  r.hd = hd;
  r.hd95 = std::max(oracle_percentile95(dab), oracle_percentile95(dba));
  r.defined = true;
  return r;
}

}  // namespace promptaug::testing

#endif  // PROMPTAUG_TESTS_SUPPORT_ORACLES_H_
