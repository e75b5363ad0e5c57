#include "sqg/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sqg/errors.hpp"

namespace sqg {

namespace {

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= static_cast<U>(static_cast<U>(p[b]) << (8 * b));
  return std::bit_cast<T>(bits);
}

}  // namespace

Snapshot Snapshot::from_state(const State& state) {
  Snapshot s;
  s.n = static_cast<std::uint32_t>(state.theta_tilde.grid->n());
  s.alpha = state.params.alpha;
  s.t = state.t;
  s.theta = spectral::inverse(model::recover_theta(state)).values;
  return s;
}

State Snapshot::to_state() const {
  PhysicalField f(make_grid(static_cast<int>(n)));
  if (theta.size() != f.values.size()) throw DataIntegrityError("snapshot value count does not match n*n");
  f.values = theta;
  ModelParams params;
  params.alpha = alpha;
  return make_state(f, params, t);
}

std::vector<unsigned char> encode_snapshot(const Snapshot& snap) {
  if (snap.n > 0xFFFF) throw ConfigError("snapshot grid size exceeds 65535");
  if (snap.theta.size() != static_cast<std::size_t>(snap.n) * snap.n) {
    throw DataIntegrityError("snapshot value count does not match n*n");
  }
  std::vector<unsigned char> out{'S', 'Q', 'G', 'A'};
  out.reserve(kSnapshotHeaderBytes + 8 * snap.theta.size());
  put_le<std::uint16_t>(out, kSnapshotVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(snap.n));
  put_le<double>(out, snap.alpha);
  put_le<double>(out, snap.t);
  for (double v : snap.theta) put_le<double>(out, v);
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4) throw TruncatedPayloadError("snapshot shorter than its magic number");
  if (std::memcmp(bytes.data(), "SQGA", 4) != 0) throw BadMagicError("snapshot magic is not 'SQGA'");
  if (bytes.size() < kSnapshotHeaderBytes) throw TruncatedPayloadError("snapshot header truncated");
  const auto version = get_le<std::uint16_t>(bytes.data() + 4);
  if (version != kSnapshotVersion) {
    throw VersionMismatchError("snapshot version " + std::to_string(version) + " is not supported");
  }
  Snapshot s;
  s.n = get_le<std::uint16_t>(bytes.data() + 6);
  s.alpha = get_le<double>(bytes.data() + 8);
  s.t = get_le<double>(bytes.data() + 16);
  const std::size_t count = static_cast<std::size_t>(s.n) * s.n;
  const std::size_t expected = kSnapshotHeaderBytes + 8 * count;
  if (bytes.size() < expected) {
    throw TruncatedPayloadError("snapshot payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                                std::to_string(expected));
  }
  if (bytes.size() > expected) throw SnapshotError("snapshot has trailing bytes after the payload");
  s.theta.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.theta[i] = get_le<double>(bytes.data() + kSnapshotHeaderBytes + 8 * i);
  return s;
}

void write_snapshot(const Snapshot& snap, const std::string& path) {
  const auto bytes = encode_snapshot(snap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

void write_snapshot(const State& state, const std::string& path) { write_snapshot(Snapshot::from_state(state), path); }

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace sqg
