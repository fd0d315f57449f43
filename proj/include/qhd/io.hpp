#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhd/config.hpp"
#include "qhd/diagnostics.hpp"
#include "qhd/grid.hpp"
#include "qhd/timestepper.hpp"

namespace qhd {

namespace exit_code {
constexpr int ok = 0;
constexpr int usage = 1; // bad config / I-O failure
constexpr int not_converged = 2;
constexpr int diverged = 3;
} // namespace exit_code

/// Parses a JSON key-value document into a fully defaulted Config.
/// Unknown keys and out-of-range values raise std::invalid_argument
/// naming the key.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// JSON form of a Config; parse_config(emit_config(c)) == c.
std::string emit_config(const Config& cfg);

struct SnapshotFields {
  VectorField u;
  ScalarField p;
  ScalarField psi;
  WField w;
};

/// One CSV per snapshot: header x,y,u_x,u_y,p,psi,w_x,w_y; rows ordered by
/// j then i; 17 significant digits so a reload is bit-identical.
void write_snapshot_csv(std::ostream& os, const State& s, const WField& w,
                        const ScalarField& psi);
SnapshotFields read_snapshot_csv(std::istream& is, const GridSpec& g);

void write_summary_json(std::ostream& os, const RunSummary& sum,
                        const Config& cfg);

/// Standalone SVG with equidistant stream-function isolines; recirculation
/// (negative psi) lines use a distinct stroke. A constant field yields the
/// domain outline only.
std::string render_svg_isolines(const ScalarField& psi, int n_levels,
                                const GridSpec& g);

int cmd_run(const std::filesystem::path& config_path,
            const std::filesystem::path& out_dir);
int cmd_sweep(const std::filesystem::path& config_path,
              const std::vector<double>& re_values,
              const std::filesystem::path& out_dir);
int cmd_validate(const std::string& case_name,
                 const std::filesystem::path& out_dir);

// QHD_LOG=0 silences progress output; 2 adds per-step detail.
int log_level();

} // namespace qhd
