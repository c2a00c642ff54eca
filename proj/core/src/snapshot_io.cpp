#include "nslab/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/transform.hpp"

namespace nslab {
namespace {

constexpr const char* kMagic = "NSLAB-SNAPSHOT 1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const auto& h = snap.header;
  if (static_cast<int>(snap.data.size()) != h.components)
    throw InvalidArgument("snapshot: component count does not match header");
  if (h.field_name.empty() || h.field_name.find_first_of(" \n") != std::string::npos)
    throw InvalidArgument("snapshot: field name must be a non-empty token");
  os << kMagic << '\n'
     << "n " << h.n << '\n'
     << "box_length " << format_real(h.box_length) << '\n'
     << "time " << format_real(h.time) << '\n'
     << "field " << h.field_name << '\n'
     << "components " << h.components << '\n'
     << "layout x-fastest float64-le\n"
     << "end\n";
  for (const auto& comp : snap.data) {
    if (comp.grid().n() != h.n) throw InvalidArgument("snapshot: component grid mismatch");
    for (double v : comp.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = to_little_endian(bits);
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!os) throw Error("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& is) {
  auto read_line = [&is]() {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("snapshot: truncated header");
    return line;
  };
  if (read_line() != kMagic) throw InvalidArgument("snapshot: bad magic line");
  Snapshot snap;
  auto& h = snap.header;
  bool have_layout = false;
  for (;;) {
    const std::string line = read_line();
    if (line == "end") break;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "n") ls >> h.n;
    else if (key == "box_length") ls >> h.box_length;
    else if (key == "time") ls >> h.time;
    else if (key == "field") ls >> h.field_name;
    else if (key == "components") ls >> h.components;
    else if (key == "layout") {
      std::string order, type;
      ls >> order >> type;
      if (order != "x-fastest" || type != "float64-le")
        throw InvalidArgument("snapshot: unsupported layout '" + line + "'");
      have_layout = true;
    } else {
      throw InvalidArgument("snapshot: unknown header key '" + key + "'");
    }
    if (ls.fail()) throw InvalidArgument("snapshot: malformed header line '" + line + "'");
  }
  if (!have_layout || h.components <= 0) throw InvalidArgument("snapshot: incomplete header");
  const GridSpec grid(h.n, h.box_length);
  for (int c = 0; c < h.components; ++c) {
    RealBuffer values(grid.real_size());
    for (auto& v : values) {
      std::uint64_t bits;
      if (!is.read(reinterpret_cast<char*>(&bits), sizeof bits))
        throw InvalidArgument("snapshot: truncated payload");
      bits = to_little_endian(bits);
      std::memcpy(&v, &bits, sizeof v);
    }
    snap.data.emplace_back(grid, std::move(values));
  }
  return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("snapshot: cannot open " + path.string() + " for writing");
  write_snapshot(os, snap);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("snapshot: cannot open " + path.string());
  return read_snapshot(is);
}

Snapshot make_snapshot(const SpectralVectorField& v, double time, std::string name) {
  Snapshot s;
  s.header = {v.grid().n(), v.grid().box_length(), time, std::move(name), 3};
  RealVectorField phys = inverse_transform(v);
  for (auto& c : phys.comp) s.data.push_back(std::move(c));
  return s;
}

Snapshot make_snapshot(const SpectralScalarField& f, double time, std::string name) {
  Snapshot s;
  s.header = {f.grid().n(), f.grid().box_length(), time, std::move(name), 1};
  s.data.push_back(inverse_transform(f));
  return s;
}

SpectralVectorField snapshot_to_vector(const Snapshot& snap, double dealias_fraction) {
  if (snap.header.components != 3) throw InvalidArgument("snapshot: expected 3 components");
  const GridSpec grid(snap.header.n, snap.header.box_length, dealias_fraction);
  std::array<SpectralScalarField, 3> c;
  for (int i = 0; i < 3; ++i)
    c[i] = SpectralScalarField(grid, forward_transform(snap.data[i]).coeffs());
  return SpectralVectorField(std::move(c[0]), std::move(c[1]), std::move(c[2]));
}

}  // namespace nslab
