#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpeoct/potential.hpp"
#include "gpeoct/wavefield.hpp"

namespace gpeoct::io {

// Raw binary field format: magic "GPF1", little-endian u32 rank,
// u32 dims[rank], u32 value kind (0 = real float64, 1 = complex float64
// interleaved re,im), payload row-major. Axes live in a sibling CSV named
// <stem>_axes.csv with rows (axis, index, value).

enum class ValueKind : uint32_t { real_f64 = 0, complex_f64 = 1 };

struct FieldData {
    std::vector<uint32_t> dims;
    ValueKind kind = ValueKind::real_f64;
    std::vector<double> real_values;
    std::vector<cplx> complex_values;

    size_t element_count() const {
        size_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
};

void write_field(const std::string& path, const std::vector<uint32_t>& dims,
                 const std::vector<double>& values);
void write_field(const std::string& path, const std::vector<uint32_t>& dims,
                 const std::vector<cplx>& values);
FieldData read_field(const std::string& path);

std::string axes_path_for(const std::string& field_path);
void write_axes(const std::string& path, const std::vector<std::vector<double>>& axes);
std::vector<std::vector<double>> read_axes(const std::string& path);

/// Doubles print with 17 significant digits, which round-trips exactly.
std::string format_double(double v);

/// Minimal CSV emitter: UTF-8, header row, comma separator.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    struct Impl;
    Impl* impl_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path);

uint64_t fnv1a64_file(const std::string& path);

/// manifest.csv lists every artifact with its size and checksum. The
/// relative paths are written in the given order.
void write_manifest(const std::string& dir, const std::vector<std::string>& files);

// Tabulated potentials travel in the same field format: one spatial slice
// per lambda sample (rank = 1 + spatial rank, dims[0] = number of samples),
// the lambda samples themselves in the leading axis of the sibling CSV.

void save_tabulated_1d(const std::string& path, const Tabulated1D& table);
Tabulated1D load_tabulated_1d(const std::string& path);
void save_tabulated_2d(const std::string& path, const Tabulated2D& table);
Tabulated2D load_tabulated_2d(const std::string& path);

} // namespace gpeoct::io
