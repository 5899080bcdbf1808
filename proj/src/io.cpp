// Dirac laboratory - snapshot and CSV output

#include "dirac/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace dirac {

namespace {


template <class T>
void put(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw ConfigError("snapshot truncated");
  if constexpr (std::endian::native == std::endian::big)
    for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

bool Snapshot::operator==(const Snapshot& o) const {
  if (d != o.d || f != o.f || nr != o.nr || ntheta != o.ntheta || k != o.k) return false;
  if (data.size() != o.data.size()) return false;
  // bitwise, so that NaN payloads and signed zeros count
  return std::memcmp(data.data(), o.data.data(), sizeof(Cplx) * data.size()) == 0;
}

Snapshot make_snapshot(const Grid& grid, int f, const CVec& full) {
  if (full.size() != static_cast<Eigen::Index>(grid.nodes()) * f)
    throw ConfigError("snapshot data size does not match grid");
  Snapshot s;
  s.d = static_cast<std::uint32_t>(grid.d);
  s.f = static_cast<std::uint32_t>(f);
  s.nr = static_cast<std::uint32_t>(grid.nr());
  s.ntheta = static_cast<std::uint32_t>(grid.nth());
  s.k = grid.k;
  s.data = full;
  return s;
}

void write_snapshot(std::ostream& out, const Snapshot& s) {
  out.write("DIRH", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, s.d);
  put<std::uint32_t>(out, s.f);
  put<std::uint32_t>(out, s.nr);
  put<std::uint32_t>(out, s.ntheta);
  put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(s.k));
  for (Eigen::Index i = 0; i < s.data.size(); ++i) {
    put<double>(out, s.data(i).real());
    put<double>(out, s.data(i).imag());
  }
  if (!out) throw Error("snapshot write failed");
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "DIRH", 4) != 0)
    throw ConfigError("not a snapshot (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion)
    throw ConfigError("unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.d = get<std::uint32_t>(in);
  s.f = get<std::uint32_t>(in);
  s.nr = get<std::uint32_t>(in);
  s.ntheta = get<std::uint32_t>(in);
  s.k = std::bit_cast<std::int32_t>(get<std::uint32_t>(in));
  const std::uint64_t n = std::uint64_t(s.nr) * s.ntheta * s.f;
  if (n > (std::uint64_t(1) << 31)) throw ConfigError("snapshot header is implausible");
  s.data.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    s.data(static_cast<Eigen::Index>(i)) = Cplx(re, im);
  }
  return s;
}

void write_snapshot_file(const std::string& path, const Snapshot& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_snapshot(out, s);
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  return read_snapshot(in);
}

void write_diagnostics_csv(std::ostream& out, const EvolutionTrace& tr) {
  out << "t,w_norm,boundary_residual,support_radius,gluing_discrepancy\n";
  out << std::setprecision(17);
  for (size_t i = 0; i < tr.t.size(); ++i)
    out << tr.t[i] << ',' << tr.w_norm[i] << ',' << tr.boundary_residual[i] << ','
        << tr.support_radius[i] << ',' << tr.gluing_discrepancy[i] << '\n';
}

void write_spectrum_csv(std::ostream& out, const SpectralBasis& b, const RVec& participation) {
  out << "index,omega,participation_at_boundary\n";
  out << std::setprecision(17);
  for (int n = 0; n < b.size(); ++n)
    out << n << ',' << b.omega(n) << ',' << participation(n) << '\n';
}

}  // namespace dirac
