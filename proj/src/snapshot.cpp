#include "nlwave/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace nlwave {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <class T> void put(std::ostream &out, T value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <class T> T get(std::istream &in, const char *what) {
  T value{};
  std::streamoff offset = in.tellg();
  if (!in.read(reinterpret_cast<char *>(&value), sizeof(T)))
    throw GridError(std::string("snapshot truncated reading ") + what +
                    " at byte " + std::to_string(offset));
  return value;
}

void put_values(std::ostream &out, const Field &f) {
  for (const auto &c : f.values()) {
    put(out, c.real());
    put(out, c.imag());
  }
}

Field get_values(std::istream &in, const Grid &grid, double t) {
  std::vector<Complex> values(grid.value_count());
  bool real = true;
  for (auto &c : values) {
    double re = get<double>(in, "field values");
    double im = get<double>(in, "field values");
    c = {re, im};
    if (im != 0.0) real = false;
  }
  return Field(grid, Representation::physical, std::move(values), t, real);
}

} // namespace

void write_snapshot(std::ostream &out, const State &state) {
  state.validate();
  State phys = to_physical(state);
  const Grid &g = phys.grid();
  out.write("NLWV", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, std::uint32_t(g.dim()));
  put<std::uint32_t>(out, std::uint32_t(g.samples()));
  put<std::uint32_t>(out, std::uint32_t(g.fiber()));
  put<double>(out, g.half_period());
  put<double>(out, phys.time());
  put_values(out, phys.u);
  put_values(out, phys.v);
  if (!out) throw GridError("snapshot write failed");
}

void write_snapshot(const std::filesystem::path &path, const State &state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridError("cannot open snapshot for writing: " + path.string());
  write_snapshot(out, state);
}

State read_snapshot(std::istream &in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::memcmp(magic.data(), "NLWV", 4) != 0)
    throw GridError("not an NLWV snapshot (bad magic)");
  auto version = get<std::uint32_t>(in, "version");
  if (version != kSnapshotVersion)
    throw GridError("unsupported snapshot version " + std::to_string(version));
  auto n = get<std::uint32_t>(in, "n");
  auto m = get<std::uint32_t>(in, "M");
  auto fiber = get<std::uint32_t>(in, "N");
  double L = get<double>(in, "L");
  double t = get<double>(in, "t");
  Grid grid(int(n), L, m, fiber);
  Field u = get_values(in, grid, t);
  Field v = get_values(in, grid, t);
  return {std::move(u), std::move(v)};
}

State read_snapshot(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridError("cannot open snapshot: " + path.string());
  return read_snapshot(in);
}

} // namespace nlwave
