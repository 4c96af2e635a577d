#include "chsolver/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "chsolver/errors.hpp"

namespace chs {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string record_row(const StepRecord& r) {
  std::string row = std::to_string(r.n);
  for (double v : {r.t, r.tau, r.gamma, r.energy, r.xi, r.eta, r.mass, r.dissipation})
    row += "," + format_double(v);
  return row;
}

double parse_field(const std::string& s, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw FormatError("records line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) return bits;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RecordWriter::RecordWriter(const std::filesystem::path& path)
    : path_(path), out_(open_for_write(path, std::ios::out | std::ios::trunc)) {
  out_ << kRecordHeader << '\n';
  out_.flush();
}

void RecordWriter::append(const StepRecord& record) {
  out_ << record_row(record) << '\n';
  out_.flush();
  if (!out_) throw IoError("write to '" + path_.string() + "' failed");
}

void write_records(std::span<const StepRecord> records, const std::filesystem::path& path) {
  RecordWriter writer(path);
  for (const auto& r : records) writer.append(r);
}

std::vector<StepRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader)
    throw FormatError("'" + path.string() + "' does not start with the record header");
  std::vector<StepRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9)
      throw FormatError("records line " + std::to_string(line_no) + ": expected 9 columns");
    StepRecord r;
    r.n = static_cast<std::size_t>(parse_field(cells[0], line_no));
    double* targets[] = {&r.t, &r.tau, &r.gamma, &r.energy, &r.xi, &r.eta, &r.mass, &r.dissipation};
    for (std::size_t i = 0; i < 8; ++i) *targets[i] = parse_field(cells[i + 1], line_no);
    out.push_back(r);
  }
  return out;
}

void write_snapshot(const SpectralField& field, double t, const std::filesystem::path& path) {
  SpectralField f = field.has_physical() ? field : to_physical(field);
  const Grid& g = f.grid();
  auto out = open_for_write(path, std::ios::out | std::ios::binary | std::ios::trunc);
  out << "CHSNAP v1 dim=" << g.dim() << " N=" << g.modes() << " L=" << format_double(g.length())
      << " t=" << format_double(t) << '\n';
  for (double v : f.physical()) {
    std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

SnapshotFile read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string header;
  if (!std::getline(in, header)) throw FormatError("missing snapshot header");

  int dim = 0, modes = 0;
  double length = 0.0, t = 0.0;
  char l_buf[64] = {0}, t_buf[64] = {0};
  int consumed = 0;
  if (std::sscanf(header.c_str(), "CHSNAP v1 dim=%d N=%d L=%63s t=%63s%n", &dim, &modes, l_buf,
                  t_buf, &consumed) != 4 ||
      static_cast<std::size_t>(consumed) != header.size())
    throw FormatError("bad snapshot header: '" + header + "'");
  char* end = nullptr;
  length = std::strtod(l_buf, &end);
  if (*end != '\0') throw FormatError("bad L in snapshot header");
  t = std::strtod(t_buf, &end);
  if (*end != '\0') throw FormatError("bad t in snapshot header");

  Grid grid = [&] {
    try {
      return Grid(dim, modes, length);
    } catch (const ValidationError& e) {
      throw FormatError(std::string("bad snapshot grid: ") + e.what());
    }
  }();

  std::vector<double> values(grid.size());
  for (auto& v : values) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw FormatError("snapshot payload shorter than N^dim values");
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(bits));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw FormatError("snapshot payload longer than N^dim values");
  return {t, SpectralField::from_physical(grid, std::move(values))};
}

void write_convergence(std::span<const ConvergenceRow> rows, std::ostream& out) {
  out << "K,tau,h1_error,h1_order,gamma_error,gamma_order,max_ratio\n";
  auto order = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const auto& r : rows) {
    out << r.steps << ',' << format_double(r.tau_max) << ',' << format_double(r.h1_error) << ','
        << order(r.h1_order) << ',' << format_double(r.gamma_error) << ',' << order(r.gamma_order)
        << ',' << format_double(r.max_ratio) << '\n';
  }
}

}  // namespace chs
