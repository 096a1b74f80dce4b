#ifndef SARTENSOR_IO_HPP
#define SARTENSOR_IO_HPP

#include "sartensor/sar_model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace sartensor {

/// Provenance stamp carried by every output file.
struct FileMeta {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a(std::string_view bytes);

/// Matrix container, bit-exact: magic "SRT1", little-endian u64 rows and
/// cols, then row-major complex entries as interleaved little-endian IEEE-754
/// doubles (re, im). Written atomically (temp file + rename).
void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m);
ComplexMatrix read_matrix(const std::filesystem::path& path);

/// DataMatrix = SRT1 payload plus a '<path>.json' sidecar holding the axes,
/// the radar configuration, and the provenance stamp.
void write_data_matrix(const std::filesystem::path& path, const DataMatrix& d,
                       const FileMeta& meta);
DataMatrix read_data_matrix(const std::filesystem::path& path);

/// CSV with '.' decimal and ',' separator; one leading '#' provenance line,
/// then the mandatory header row.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, const FileMeta& meta);

/// 8-bit binary PGM of the values scaled to [0, max]; ny rows of nx values.
void write_pgm(const std::filesystem::path& path, const std::vector<double>& values,
               std::size_t nx, std::size_t ny, const FileMeta& meta);

/// Atomic text write used for the JSON reports.
void write_text(const std::filesystem::path& path, const std::string& body);

} // namespace sartensor

#endif
