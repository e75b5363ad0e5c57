#pragma once

// Binary snapshot of physical theta. Layout, all little-endian:
//
//   offset  size  field
//        0     4  magic "SQGA"
//        4     2  version (u16) = 1
//        6     2  n (u16)
//        8     8  alpha (f64)
//       16     8  t (f64)
//       24  8n^2  theta values (f64), row-major
//
// The file is exactly 24 + 8 n^2 bytes.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqg/model.hpp"

namespace sqg {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BadMagicError : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};
class VersionMismatchError : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};
class TruncatedPayloadError : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};

struct Snapshot {
  std::uint32_t n = 0;
  double alpha = 0.0;
  double t = 0.0;
  std::vector<double> theta;  // n*n physical values

  static Snapshot from_state(const State& state);
  /// Rebuilds theta_tilde = (1 - alpha^2 Lap) theta.
  State to_state() const;
};

inline constexpr std::uint16_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 24;

std::vector<unsigned char> encode_snapshot(const Snapshot& snap);
/// Throws BadMagicError, VersionMismatchError or TruncatedPayloadError.
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

void write_snapshot(const Snapshot& snap, const std::string& path);
void write_snapshot(const State& state, const std::string& path);
Snapshot read_snapshot(const std::string& path);

}  // namespace sqg
