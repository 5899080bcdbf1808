// Dirac laboratory - snapshot and CSV output
//
// Snapshot layout: "DIRH", then little-endian u32 version, d, f, Nr, Ntheta, k (two's
// complement bits), then float64 pairs (re, im), node-major and component-minor.

#ifndef DIRAC_IO_HPP_
#define DIRAC_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dirac/common.hpp"
#include "dirac/evolution.hpp"
#include "dirac/spectral.hpp"

namespace dirac {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  std::uint32_t d = 0, f = 0, nr = 0, ntheta = 0;
  std::int32_t k = 0;
  CVec data;

  bool operator==(const Snapshot& o) const;
};

Snapshot make_snapshot(const Grid& grid, int f, const CVec& full);
void write_snapshot(std::ostream& out, const Snapshot& s);
Snapshot read_snapshot(std::istream& in);  // ConfigError on a malformed stream
void write_snapshot_file(const std::string& path, const Snapshot& s);
Snapshot read_snapshot_file(const std::string& path);

// t, w_norm, boundary_residual, support_radius, gluing_discrepancy
void write_diagnostics_csv(std::ostream& out, const EvolutionTrace& trace);
// index, omega, participation_at_boundary
void write_spectrum_csv(std::ostream& out, const SpectralBasis& b, const RVec& participation);

}  // namespace dirac

#endif  // DIRAC_IO_HPP_
