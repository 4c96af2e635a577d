#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "chsolver/experiments.hpp"
#include "chsolver/stepper.hpp"

namespace chs {

/// Header of the step-record CSV.
inline constexpr const char* kRecordHeader = "n,t,tau,gamma,energy,xi,eta,mass,dissipation";

/// Streams step records to a CSV file, one row per append, flushed
/// immediately so long runs can be inspected mid-flight.
class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);
  void append(const StepRecord& record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_records(std::span<const StepRecord> records, const std::filesystem::path& path);
/// Throws IoError or FormatError.
std::vector<StepRecord> read_records(const std::filesystem::path& path);

/// CHSNAP v1: the ASCII line `CHSNAP v1 dim=<d> N=<N> L=<L> t=<time>\n`
/// followed by N^dim little-endian IEEE-754 doubles in row-major order.
void write_snapshot(const SpectralField& field, double t, const std::filesystem::path& path);

struct SnapshotFile {
  double t;
  SpectralField field;
};

/// Throws FormatError on a bad magic line or a payload of the wrong length.
SnapshotFile read_snapshot(const std::filesystem::path& path);

/// Columns K,tau,h1_error,h1_order,gamma_error,gamma_order,max_ratio. Orders
/// of the first row are left empty.
void write_convergence(std::span<const ConvergenceRow> rows, std::ostream& out);

/// Shortest round-trip decimal form of a double (17 significant digits).
std::string format_double(double value);

}  // namespace chs
