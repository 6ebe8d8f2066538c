#include "gpeoct/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gpeoct/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "the field format is little-endian; big-endian hosts need byte swaps");

namespace gpeoct::io {

namespace {

constexpr char magic[4] = {'G', 'P', 'F', '1'};

void put_u32(std::ofstream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_header(std::ofstream& out, const std::vector<uint32_t>& dims, ValueKind kind) {
    out.write(magic, 4);
    put_u32(out, static_cast<uint32_t>(dims.size()));
    for (uint32_t d : dims) put_u32(out, d);
    put_u32(out, static_cast<uint32_t>(kind));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open file for writing: " + path);
    return out;
}

} // namespace

void write_field(const std::string& path, const std::vector<uint32_t>& dims,
                 const std::vector<double>& values) {
    std::ofstream out = open_out(path);
    write_header(out, dims, ValueKind::real_f64);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

void write_field(const std::string& path, const std::vector<uint32_t>& dims,
                 const std::vector<cplx>& values) {
    std::ofstream out = open_out(path);
    write_header(out, dims, ValueKind::complex_f64);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
}

FieldData read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericalError("cannot open field file: " + path);
    char m[4];
    in.read(m, 4);
    if (!in || std::memcmp(m, magic, 4) != 0)
        throw NumericalError("not a GPF1 field file: " + path);
    FieldData fd;
    const uint32_t rank = get_u32(in);
    if (rank == 0 || rank > 8) throw NumericalError("implausible field rank in " + path);
    fd.dims.resize(rank);
    for (uint32_t r = 0; r < rank; ++r) fd.dims[r] = get_u32(in);
    fd.kind = static_cast<ValueKind>(get_u32(in));
    const size_t n = fd.element_count();
    if (fd.kind == ValueKind::real_f64) {
        fd.real_values.resize(n);
        in.read(reinterpret_cast<char*>(fd.real_values.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    } else if (fd.kind == ValueKind::complex_f64) {
        fd.complex_values.resize(n);
        in.read(reinterpret_cast<char*>(fd.complex_values.data()),
                static_cast<std::streamsize>(n * sizeof(cplx)));
    } else {
        throw NumericalError("unknown value kind in " + path);
    }
    if (!in) throw NumericalError("truncated field file: " + path);
    return fd;
}

std::string axes_path_for(const std::string& field_path) {
    const auto dot = field_path.rfind('.');
    const auto slash = field_path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return field_path + "_axes.csv";
    return field_path.substr(0, dot) + "_axes.csv";
}

void write_axes(const std::string& path, const std::vector<std::vector<double>>& axes) {
    CsvWriter csv(path, {"axis", "index", "value"});
    for (size_t a = 0; a < axes.size(); ++a)
        for (size_t i = 0; i < axes[a].size(); ++i)
            csv.row({double(a), double(i), axes[a][i]});
}

std::vector<std::vector<double>> read_axes(const std::string& path) {
    const auto rows = read_csv(path);
    std::vector<std::vector<double>> axes;
    for (size_t r = 1; r < rows.size(); ++r) { // skip header
        if (rows[r].size() != 3) throw NumericalError("malformed axes CSV: " + path);
        const size_t a = static_cast<size_t>(std::stoul(rows[r][0]));
        if (a >= axes.size()) axes.resize(a + 1);
        axes[a].push_back(std::stod(rows[r][2]));
    }
    return axes;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl{std::ofstream(path, std::ios::trunc)}) {
    if (!impl_->out) {
        delete impl_;
        throw NumericalError("cannot open file for writing: " + path);
    }
    row(header);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells(values.size());
    for (size_t i = 0; i < values.size(); ++i) cells[i] = format_double(values[i]);
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << cells[i];
    }
    impl_->out << '\n';
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NumericalError("cannot open csv: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericalError("cannot open file for checksum: " + path);
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& files) {
    CsvWriter csv(dir + "/manifest.csv", {"path", "bytes", "fnv1a64"});
    for (const auto& rel : files) {
        const std::string full = dir + "/" + rel;
        std::ifstream in(full, std::ios::binary | std::ios::ate);
        if (!in) throw NumericalError("manifest: missing artifact " + full);
        const auto bytes = static_cast<uint64_t>(in.tellg());
        in.close();
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64_file(full));
        csv.row(std::vector<std::string>{rel, std::to_string(bytes), hex});
    }
}

void save_tabulated_1d(const std::string& path, const Tabulated1D& table) {
    const uint32_t n_l = static_cast<uint32_t>(table.lambda_samples.size());
    const uint32_t n_x = static_cast<uint32_t>(table.x_axis.size());
    std::vector<double> payload;
    payload.reserve(size_t(n_l) * n_x);
    for (const auto& s : table.slices) payload.insert(payload.end(), s.begin(), s.end());
    write_field(path, {n_l, n_x}, payload);
    write_axes(axes_path_for(path), {table.lambda_samples, table.x_axis});
}

Tabulated1D load_tabulated_1d(const std::string& path) {
    const FieldData fd = read_field(path);
    if (fd.kind != ValueKind::real_f64 || fd.dims.size() != 2)
        throw NumericalError("tabulated 1D potential must be a rank-2 real field: " + path);
    const auto axes = read_axes(axes_path_for(path));
    if (axes.size() != 2 || axes[0].size() != fd.dims[0] || axes[1].size() != fd.dims[1])
        throw NumericalError("axes CSV does not match field dimensions: " + path);
    std::vector<std::vector<double>> slices(fd.dims[0], std::vector<double>(fd.dims[1]));
    for (uint32_t k = 0; k < fd.dims[0]; ++k)
        for (uint32_t i = 0; i < fd.dims[1]; ++i)
            slices[k][i] = fd.real_values[size_t(k) * fd.dims[1] + i];
    return Tabulated1D(axes[0], axes[1], slices);
}

void save_tabulated_2d(const std::string& path, const Tabulated2D& table) {
    const uint32_t n_l = static_cast<uint32_t>(table.lambda_samples.size());
    const uint32_t n_x = static_cast<uint32_t>(table.x_axis.size());
    const uint32_t n_y = static_cast<uint32_t>(table.y_axis.size());
    std::vector<double> payload;
    payload.reserve(size_t(n_l) * n_x * n_y);
    for (const auto& s : table.slices) payload.insert(payload.end(), s.begin(), s.end());
    write_field(path, {n_l, n_x, n_y}, payload);
    write_axes(axes_path_for(path), {table.lambda_samples, table.x_axis, table.y_axis});
}

Tabulated2D load_tabulated_2d(const std::string& path) {
    const FieldData fd = read_field(path);
    if (fd.kind != ValueKind::real_f64 || fd.dims.size() != 3)
        throw NumericalError("tabulated 2D potential must be a rank-3 real field: " + path);
    const auto axes = read_axes(axes_path_for(path));
    if (axes.size() != 3 || axes[0].size() != fd.dims[0] || axes[1].size() != fd.dims[1] ||
        axes[2].size() != fd.dims[2])
        throw NumericalError("axes CSV does not match field dimensions: " + path);
    const size_t slice = size_t(fd.dims[1]) * fd.dims[2];
    std::vector<std::vector<double>> slices(fd.dims[0], std::vector<double>(slice));
    for (uint32_t k = 0; k < fd.dims[0]; ++k)
        for (size_t q = 0; q < slice; ++q)
            slices[k][q] = fd.real_values[size_t(k) * slice + q];
    return Tabulated2D(axes[0], axes[1], axes[2], slices);
}

} // namespace gpeoct::io
