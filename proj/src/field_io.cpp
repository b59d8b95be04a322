#include "logsch/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "logsch/numfmt.hpp"

namespace logsch {

namespace {

constexpr const char* kMagic = "LSEF1";

void put_le64(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>(bits & 0xffu));
        bits >>= 8;
    }
}

double get_le64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
}

std::string read_line(const std::string& bytes, std::size_t& pos) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos) throw FieldFormatError("truncated header");
    std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
}

}  // namespace

std::string encode_field(const Grid& g, const Field& u) {
    require_same_grid(g, u, "encode_field");
    std::string out;
    out.reserve(64 + 8 * u.size());
    out += kMagic;
    out += '\n';
    out += std::to_string(g.dim()) + ' ' + std::to_string(g.points_per_dim()) + ' ' +
           format_double(g.half_width()) + '\n';
    for (double v : u.values()) put_le64(out, v);
    return out;
}

std::pair<Grid, Field> decode_field(const std::string& bytes) {
    std::size_t pos = 0;
    if (read_line(bytes, pos) != kMagic) throw FieldFormatError("bad magic (expected LSEF1)");

    const std::string header = read_line(bytes, pos);
    std::istringstream hs(header);
    std::string sdim, spoints, swidth, extra;
    if (!(hs >> sdim >> spoints >> swidth) || (hs >> extra)) {
        throw FieldFormatError("malformed header line '" + header + "'");
    }
    int dim = 0, points = 0;
    double width = 0.0;
    try {
        dim = static_cast<int>(parse_int(sdim));
        points = static_cast<int>(parse_int(spoints));
        width = parse_double(swidth);
    } catch (const std::invalid_argument& e) {
        throw FieldFormatError(std::string("malformed header: ") + e.what());
    }

    std::optional<Grid> grid;
    try {
        grid.emplace(dim, width, points);
    } catch (const std::invalid_argument& e) {
        throw FieldFormatError(std::string("dimension mismatch in header: ") + e.what());
    }

    const std::size_t need = 8 * grid->size();
    const std::size_t have = bytes.size() - pos;
    if (have < need) {
        throw FieldFormatError("truncated payload: expected " + std::to_string(need) + " bytes, found " +
                               std::to_string(have));
    }
    if (have > need) {
        throw FieldFormatError("dimension mismatch: payload has " + std::to_string(have - need) + " trailing bytes");
    }
    Field u(*grid);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    for (std::size_t i = 0; i < grid->size(); ++i) u[i] = get_le64(p + 8 * i);
    return {*grid, std::move(u)};
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!os.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
}

void write_field(const std::filesystem::path& path, const Grid& g, const Field& u) {
    write_text_atomic(path, encode_field(g, u));
}

std::pair<Grid, Field> read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open field file '" + path.string() + "'");
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_field(bytes);
}

}  // namespace logsch
