#include "sqg/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "sqg/error.hpp"

namespace sqg {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return v;
}

double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
    const Grid& g = s.theta.grid;
    std::vector<unsigned char> bytes;
    bytes.reserve(36 + 8 * g.size());
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    put_u32(bytes, kVersion);
    put_f64(bytes, s.alpha);
    put_f64(bytes, g.L);
    put_f64(bytes, s.t);
    put_u32(bytes, static_cast<std::uint32_t>(g.N));
    for (double v : s.theta.data) put_f64(bytes, v);

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        out.close();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename snapshot into place: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 36 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw IoError("not a snapshot file: " + path.string());
    }
    if (get_u32(bytes.data() + 4) != kVersion) {
        throw IoError("unsupported snapshot version in " + path.string());
    }
    Snapshot s;
    s.alpha = get_f64(bytes.data() + 8);
    const double L = get_f64(bytes.data() + 16);
    s.t = get_f64(bytes.data() + 24);
    const auto n = get_u32(bytes.data() + 32);
    const std::size_t expected = 36 + 8 * static_cast<std::size_t>(n) * n;
    if (bytes.size() != expected) throw IoError("snapshot payload size mismatch: " + path.string());
    Grid g;
    try {
        g = make_grid(static_cast<int>(n), L);
    } catch (const DomainError& e) {
        throw IoError("snapshot header invalid: " + std::string(e.what()));
    }
    s.theta = Field(g);
    for (std::size_t k = 0; k < g.size(); ++k) s.theta.data[k] = get_f64(bytes.data() + 36 + 8 * k);
    return s;
}

}  // namespace sqg
