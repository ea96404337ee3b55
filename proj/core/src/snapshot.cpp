#include "geoflow/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoflow {

namespace {

constexpr const char* kMagic = "GEOFLOW1";

std::string shortest(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format period");
    return {buf.data(), end};
}

std::uint64_t to_little_endian(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return out;
    }
    return bits;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& f) {
    const auto& g = f.grid();
    out << kMagic << ' ' << g.dim() << ' ' << g.points() << ' ' << shortest(g.period()) << ' '
        << f.components() << '\n';
    std::vector<char> bytes(f.values().size() * 8);
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(f.values()[i]));
        std::memcpy(bytes.data() + 8 * i, &bits, 8);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing snapshot");
}

Field read_snapshot(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("snapshot: missing header");
    std::istringstream hs(header);
    std::string magic, period_text;
    int dim = 0, points = 0, components = 0;
    hs >> magic >> dim >> points >> period_text >> components;
    if (!hs || magic != kMagic) throw std::runtime_error("snapshot: malformed header '" + header + "'");
    double period = 0.0;
    auto [ptr, ec] = std::from_chars(period_text.data(), period_text.data() + period_text.size(), period);
    if (ec != std::errc{} || ptr != period_text.data() + period_text.size()) {
        throw std::runtime_error("snapshot: bad period '" + period_text + "'");
    }
    GridSpec grid(dim, points, period);
    const std::size_t count = grid.sites() * static_cast<std::size_t>(components);
    std::vector<char> bytes(count * 8);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw std::runtime_error("snapshot: truncated payload");
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes.data() + 8 * i, 8);
        values[i] = std::bit_cast<double>(to_little_endian(bits));
    }
    return {grid, components, std::move(values)};
}

void write_snapshot(const std::filesystem::path& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_snapshot(out, f);
}

Field read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace geoflow
