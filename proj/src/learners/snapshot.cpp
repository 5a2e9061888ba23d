#include "pplab/learners/snapshot.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pplab::learners {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'P', 'P', 'Q', 'T'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("snapshot: truncated stream");
  return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const QTable& table, const std::string& descriptor) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(descriptor.size()));
  out.write(descriptor.data(), static_cast<std::streamsize>(descriptor.size()));
  put<std::uint64_t>(out, table.action_count());
  put<std::uint64_t>(out, table.entry_count());
  for (StateKey s : table.sorted_states()) {
    const double* row = table.find_row(s);
    for (std::size_t a = 0; a < table.action_count(); ++a) {
      put<std::uint64_t>(out, s.bits);
      put<std::uint32_t>(out, static_cast<std::uint32_t>(a));
      put<double>(out, row[a]);
    }
  }
  if (!out) throw std::runtime_error("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("snapshot: bad magic");
  if (get<std::uint32_t>(in) != kSnapshotVersion) throw std::runtime_error("snapshot: unsupported version");
  std::string descriptor(get<std::uint32_t>(in), '\0');
  if (!in.read(descriptor.data(), static_cast<std::streamsize>(descriptor.size())))
    throw std::runtime_error("snapshot: truncated descriptor");
  const auto width = get<std::uint64_t>(in);
  const auto entries = get<std::uint64_t>(in);
  if (width == 0) throw std::runtime_error("snapshot: zero action count");
  Snapshot snap{std::move(descriptor), QTable(width)};
  for (std::uint64_t e = 0; e < entries; ++e) {
    const StateKey s{get<std::uint64_t>(in)};
    const auto action = get<std::uint32_t>(in);
    const auto value = get<double>(in);
    if (action >= width) throw std::runtime_error("snapshot: action index out of range");
    snap.table.row_for_update(s)[action] = value;
  }
  return snap;
}

}  // namespace pplab::learners
