#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nslab/fields.hpp"

namespace nslab {

/// Header of a snapshot file. The byte layout is documented in
/// docs/snapshot_format.md.
struct SnapshotHeader {
  int n = 0;
  double box_length = 0.0;
  double time = 0.0;
  std::string field_name;
  int components = 0;
};

/// Physical-space payload of a snapshot: `components` arrays of n^3 values.
struct Snapshot {
  SnapshotHeader header;
  std::vector<RealScalarField> data;
};

void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Convenience wrappers transforming to and from physical space.
Snapshot make_snapshot(const SpectralVectorField& v, double time, std::string name);
Snapshot make_snapshot(const SpectralScalarField& f, double time, std::string name);
SpectralVectorField snapshot_to_vector(const Snapshot& snap, double dealias_fraction = 2.0 / 3.0);

}  // namespace nslab
