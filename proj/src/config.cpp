#include "qhd/config.hpp"

#include <stdexcept>
#include <string>

#include "qhd/boundary.hpp"

namespace qhd {

namespace {
[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw std::invalid_argument("config key '" + key + "': " + msg);
}
} // namespace

double resolved_tau0(const Config& cfg) {
  return cfg.tau0 ? *cfg.tau0 : 0.5 / cfg.re;
}

double resolved_tau(const Config& cfg) {
  return compute_tau(cfg.gamma, cfg.schmidt, cfg.mach, cfg.re_s,
                     resolved_tau0(cfg));
}

void validate(const Config& cfg) {
  if (!(cfg.re > 0.0)) fail("re", "must be > 0");
  if (!(cfg.h_ratio >= 0.0 && cfg.h_ratio < 1.0)) fail("h_ratio", "must lie in [0, 1)");
  if (!(cfg.length > 0.0)) fail("length", "must be > 0");
  if (cfg.nx != 0 || cfg.ny != 0) {
    if (cfg.nx < 4) fail("nx", "must be >= 4 when node counts are explicit");
    if (cfg.ny < 4) fail("ny", "must be >= 4 when node counts are explicit");
  } else {
    if (!(cfg.dx > 0.0)) fail("dx", "must be > 0");
    if (!(cfg.dy > 0.0)) fail("dy", "must be > 0");
  }
  if (!(cfg.dt > 0.0)) fail("dt", "must be > 0");
  if (cfg.tau0 && !(*cfg.tau0 >= 0.0)) fail("tau0", "must be >= 0");
  if (!(cfg.gamma >= 0.0)) fail("gamma", "must be >= 0");
  if (!(cfg.schmidt > 0.0)) fail("schmidt", "must be > 0");
  if (!(cfg.mach >= 0.0)) fail("mach", "must be >= 0");
  if (!(cfg.re_s > 0.0)) fail("re_s", "must be > 0");
  if (!(cfg.flow_rate >= 0.0)) fail("flow_rate", "must be >= 0");
  if (!(cfg.conv_tol > 0.0)) fail("conv_tol", "must be > 0");
  if (!(cfg.t_max >= 0.0)) fail("t_max", "must be >= 0");
  if (!(cfg.poisson_tol > 0.0)) fail("poisson_tol", "must be > 0");
  if (cfg.poisson_max_iter < 1) fail("poisson_max_iter", "must be >= 1");
  if (cfg.snapshot_every < 0) fail("snapshot_every", "must be >= 0");
  if (cfg.conv_check_every < 1) fail("conv_check_every", "must be >= 1");
  // the pressure equation degenerates as tau -> 0
  if (resolved_tau(cfg) < 1e-6)
    fail("tau0", "resolved smoothing parameter must be >= 1e-6");
}

} // namespace qhd
