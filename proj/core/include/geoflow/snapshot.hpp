#pragma once

#include <filesystem>
#include <iosfwd>

#include "geoflow/grid.hpp"

namespace geoflow {

/// Snapshot layout: one ASCII header line `GEOFLOW1 dim M L components`
/// followed by the values as little-endian float64, site-major. L is written
/// as the shortest decimal that round-trips, so read(write(f)) == f bit for bit.
void write_snapshot(std::ostream& out, const Field& f);
Field read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const Field& f);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace geoflow
