#include "sartensor/io.hpp"

#include "sartensor/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sartensor {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'T', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(os, bits);
}

double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

void atomic_rename(const std::filesystem::path& tmp, const std::filesystem::path& path) {
    std::filesystem::rename(tmp, path);
}

std::filesystem::path tmp_path(const std::filesystem::path& path) {
    auto p = path;
    p += ".tmp";
    return p;
}

} // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
    const auto tmp = tmp_path(path);
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("write_matrix: cannot open " + tmp.string());
        os.write(kMagic, 4);
        put_u64(os, m.rows());
        put_u64(os, m.cols());
        if constexpr (std::endian::native == std::endian::little) {
            os.write(reinterpret_cast<const char*>(m.data().data()),
                     static_cast<std::streamsize>(m.size() * sizeof(cplx)));
        } else {
            for (const cplx& v : m.data()) {
                put_f64(os, v.real());
                put_f64(os, v.imag());
            }
        }
        if (!os) throw std::runtime_error("write_matrix: short write to " + tmp.string());
    }
    atomic_rename(tmp, path);
}

ComplexMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_matrix: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_matrix: " + path.string() + " is not an SRT1 file");
    const std::uint64_t rows = get_u64(is);
    const std::uint64_t cols = get_u64(is);
    if (rows == 0 || cols == 0 || rows * cols > (std::uint64_t(1) << 32))
        throw std::runtime_error("read_matrix: implausible shape in " + path.string());
    std::vector<cplx> data(rows * cols);
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(cplx)));
    } else {
        for (cplx& v : data) {
            const double re = get_f64(is);
            const double im = get_f64(is);
            v = cplx(re, im);
        }
    }
    if (!is) throw std::runtime_error("read_matrix: truncated file " + path.string());
    return ComplexMatrix(rows, cols, std::move(data));
}

void write_data_matrix(const std::filesystem::path& path, const DataMatrix& d,
                       const FileMeta& meta) {
    write_matrix(path, d.values);
    nlohmann::json j;
    j["rows"] = d.values.rows();
    j["cols"] = d.values.cols();
    j["slow_axis_s"] = d.slow_axis;
    j["fast_axis_s"] = d.fast_axis;
    j["radar"] = radar_to_json(d.config);
    j["config_hash"] = meta.config_hash;
    j["seed"] = meta.seed;
    auto side = path;
    side += ".json";
    write_text(side, j.dump(2) + "\n");
}

DataMatrix read_data_matrix(const std::filesystem::path& path) {
    DataMatrix d;
    d.values = read_matrix(path);
    auto side = path;
    side += ".json";
    std::ifstream is(side);
    if (!is)
        throw std::runtime_error("read_data_matrix: missing sidecar " + side.string());
    nlohmann::json j = nlohmann::json::parse(is);
    d.slow_axis = j.at("slow_axis_s").get<std::vector<double>>();
    d.fast_axis = j.at("fast_axis_s").get<std::vector<double>>();
    d.config = radar_from_json(j.at("radar"));
    if (d.slow_axis.size() != d.values.rows() || d.fast_axis.size() != d.values.cols())
        throw std::runtime_error("read_data_matrix: axis lengths disagree with the matrix in " +
                                 path.string());
    return d;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, const FileMeta& meta) {
    std::ostringstream body;
    body << "# config_hash=" << std::hex << meta.config_hash << std::dec
         << " seed=" << meta.seed << "\n";
    body << header << "\n";
    body.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body << ",";
            body << row[i];
        }
        body << "\n";
    }
    write_text(path, body.str());
}

void write_pgm(const std::filesystem::path& path, const std::vector<double>& values,
               std::size_t nx, std::size_t ny, const FileMeta& meta) {
    if (values.size() != nx * ny) throw std::invalid_argument("write_pgm: size mismatch");
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;

    const auto tmp = tmp_path(path);
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("write_pgm: cannot open " + tmp.string());
        os << "P5\n# config_hash=" << std::hex << meta.config_hash << std::dec
           << " seed=" << meta.seed << "\n"
           << nx << " " << ny << "\n255\n";
        for (double v : values) {
            const int g = static_cast<int>(std::lround(255.0 * std::clamp(v / vmax, 0.0, 1.0)));
            os.put(static_cast<char>(g));
        }
    }
    atomic_rename(tmp, path);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    const auto tmp = tmp_path(path);
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("write_text: cannot open " + tmp.string());
        os.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!os) throw std::runtime_error("write_text: short write to " + tmp.string());
    }
    atomic_rename(tmp, path);
}

} // namespace sartensor
