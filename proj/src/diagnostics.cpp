#include "qhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace qhd {

namespace {

// One trapezoid increment shared by stream_function and mass_flux, so the
// column sums are bit-identical between the two.
inline double trapz_increment(double f_lo, double f_hi, double dy) {
  return 0.5 * dy * (f_lo + f_hi);
}

} // namespace

ScalarField stream_function(const VectorField& u, const WField& w,
                            const GridSpec& g) {
  require_same_grid(u.grid(), g, "stream_function");
  require_same_grid(w.grid(), g, "stream_function");
  ScalarField psi(g);
  for (int i = 0; i < g.nx; ++i) {
    psi(i, 0) = 0.0;
    for (int j = 1; j < g.ny; ++j) {
      const double f_lo = u.x()(i, j - 1) - w.x()(i, j - 1);
      const double f_hi = u.x()(i, j) - w.x()(i, j);
      psi(i, j) = psi(i, j - 1) + trapz_increment(f_lo, f_hi, g.dy);
    }
  }
  return psi;
}

double mass_flux(const VectorField& u, const WField& w, const GridSpec& g,
                 int column) {
  require_same_grid(u.grid(), g, "mass_flux");
  require_same_grid(w.grid(), g, "mass_flux");
  if (column < 0 || column >= g.nx)
    throw std::out_of_range("mass_flux: column out of range");
  double flux = 0.0;
  for (int j = 1; j < g.ny; ++j) {
    const double f_lo = u.x()(column, j - 1) - w.x()(column, j - 1);
    const double f_hi = u.x()(column, j) - w.x()(column, j);
    flux += trapz_increment(f_lo, f_hi, g.dy);
  }
  return flux;
}

double separation_length(const ScalarField& psi, const GridSpec& g) {
  require_same_grid(psi.grid(), g, "separation_length");
  const int j = 1; // first node row above the lower wall
  double crossing = 0.0;
  bool saw_negative = false;
  for (int i = 0; i < g.nx - 1; ++i) {
    const double a = psi(i, j);
    const double b = psi(i + 1, j);
    if (a < 0.0) saw_negative = true;
    if (a < 0.0 && b >= 0.0)
      crossing = g.x(i) + g.dx * (a / (a - b));
  }
  if (psi(g.nx - 1, j) < 0.0) return g.length; // bubble reaches the outlet
  if (!saw_negative) return 0.0;
  return crossing;
}

namespace {

struct Segment {
  std::array<double, 2> a;
  std::array<double, 2> b;
};

using Key = std::pair<long long, long long>;

Key quantize(const std::array<double, 2>& p, double scale) {
  return {static_cast<long long>(std::llround(p[0] * scale)),
          static_cast<long long>(std::llround(p[1] * scale))};
}

std::array<double, 2> edge_point(double x1, double y1, double v1, double x2,
                                 double y2, double v2, double level) {
  double t = (v2 == v1) ? 0.5 : (level - v1) / (v2 - v1);
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return {x1 + t * (x2 - x1), y1 + t * (y2 - y1)};
}

std::vector<Polyline> stitch(const std::vector<Segment>& segs, double scale) {
  std::multimap<Key, std::size_t> ends;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    ends.insert({quantize(segs[s].a, scale), s});
    ends.insert({quantize(segs[s].b, scale), s});
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> chains;

  auto take_next = [&](const Key& key, std::size_t& seg_out) {
    auto [lo, hi] = ends.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (!used[it->second]) {
        seg_out = it->second;
        return true;
      }
    }
    return false;
  };

  for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    Polyline chain{segs[s0].a, segs[s0].b};
    // grow forward from the tail, then backward from the head
    for (int dir = 0; dir < 2; ++dir) {
      while (true) {
        const Key key = quantize(chain.back(), scale);
        std::size_t s;
        if (!take_next(key, s)) break;
        used[s] = true;
        const Key ka = quantize(segs[s].a, scale);
        chain.push_back(ka == key ? segs[s].b : segs[s].a);
      }
      std::reverse(chain.begin(), chain.end());
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

} // namespace

IsolineSet extract_isolines(const ScalarField& psi,
                            const std::vector<double>& levels,
                            const GridSpec& g) {
  require_same_grid(psi.grid(), g, "extract_isolines");
  for (double c : levels)
    if (!std::isfinite(c))
      throw std::invalid_argument("extract_isolines: non-finite level");

  IsolineSet out;
  out.levels = levels;
  out.polylines.resize(levels.size());
  const double scale = 1e9 / std::min(g.dx, g.dy);

  for (std::size_t lv = 0; lv < levels.size(); ++lv) {
    const double c = levels[lv];
    std::vector<Segment> segs;
    for (int j = 0; j < g.ny - 1; ++j) {
      for (int i = 0; i < g.nx - 1; ++i) {
        const double x0 = g.x(i), x1 = g.x(i + 1);
        const double y0 = g.y(j), y1 = g.y(j + 1);
        const double f00 = psi(i, j), f10 = psi(i + 1, j);
        const double f01 = psi(i, j + 1), f11 = psi(i + 1, j + 1);
        int mask = 0;
        if (f00 > c) mask |= 1;
        if (f10 > c) mask |= 2;
        if (f11 > c) mask |= 4;
        if (f01 > c) mask |= 8;
        if (mask == 0 || mask == 15) continue;

        const auto bottom = [&] { return edge_point(x0, y0, f00, x1, y0, f10, c); };
        const auto top = [&] { return edge_point(x0, y1, f01, x1, y1, f11, c); };
        const auto left = [&] { return edge_point(x0, y0, f00, x0, y1, f01, c); };
        const auto right = [&] { return edge_point(x1, y0, f10, x1, y1, f11, c); };

        switch (mask) {
          case 1: case 14: segs.push_back({left(), bottom()}); break;
          case 2: case 13: segs.push_back({bottom(), right()}); break;
          case 4: case 11: segs.push_back({right(), top()}); break;
          case 8: case 7: segs.push_back({top(), left()}); break;
          case 3: case 12: segs.push_back({left(), right()}); break;
          case 6: case 9: segs.push_back({bottom(), top()}); break;
          case 5: case 10: { // saddle: split by the cell-centre value
            const double centre = 0.25 * (f00 + f10 + f01 + f11);
            const bool centre_in = centre > c;
            if ((mask == 5) == centre_in) {
              segs.push_back({left(), top()});
              segs.push_back({bottom(), right()});
            } else {
              segs.push_back({left(), bottom()});
              segs.push_back({right(), top()});
            }
            break;
          }
          default: break;
        }
      }
    }
    out.polylines[lv] = stitch(segs, scale);
  }
  return out;
}

} // namespace qhd
