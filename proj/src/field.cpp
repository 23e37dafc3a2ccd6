#include "blpp/field.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <vector>

#include "blpp/rng.hpp"

namespace blpp {

BrownianField generate_field(const FieldSpec& spec) {
  spec.validate();
  const int levels = spec.levels();
  const int nodes = spec.nodes();
  const int anchor = spec.zero_index();
  const double step = std::sqrt(spec.delta);

  BrownianField field;
  field.spec = spec;
  field.values.resize(levels, nodes);

  // One increment per grid cell, keyed by (seed, level, cell). Cumulative
  // sums re-anchored at node 0 make both half-lines independent Brownian
  // motions pinned to B(0) = 0, matching the two-sided construction.
  std::vector<double> partial(nodes);
  for (int r = 0; r < levels; ++r) {
    const int level = spec.level_min + r;
    partial[0] = 0.0;
    for (int i = 1; i < nodes; ++i)
      partial[i] = partial[i - 1] + step * gaussian(spec.seed, level, i - 1);
    const double base = partial[anchor];
    for (int i = 0; i < nodes; ++i) field.values(r, i) = partial[i] - base;
  }
  return field;
}

BrownianField inject_field(const FieldSpec& spec, const LevelMatrix& arrays) {
  spec.validate();
  if (arrays.rows() != spec.levels() || arrays.cols() != spec.nodes())
    throw std::invalid_argument("inject_field: array shape does not match spec");
  BrownianField field;
  field.spec = spec;
  field.values = arrays;
  return field;
}

namespace {

constexpr char kMagic[5] = {'B', 'L', 'P', 'P', '1'};

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

std::uint32_t crc_table_entry(std::uint32_t i) {
  std::uint32_t c = i;
  for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
  return c;
}

const std::array<std::uint32_t, 256>& crc_table() {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) t[i] = crc_table_entry(i);
    return t;
  }();
  return table;
}

}  // namespace

std::uint32_t crc32(const unsigned char* data, std::size_t n, std::uint32_t crc) {
  crc = ~crc;
  for (std::size_t i = 0; i < n; ++i) crc = crc_table()[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  return ~crc;
}

void save_field(const BrownianField& field, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_field: cannot open " + path);
  FileCloser closer{f};

  std::vector<unsigned char> buf;
  auto put = [&buf](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    buf.insert(buf.end(), b, b + n);
  };
  put(kMagic, sizeof(kMagic));
  const std::int32_t lmin = field.spec.level_min, lmax = field.spec.level_max;
  put(&lmin, 4);
  put(&lmax, 4);
  put(&field.spec.t_min, 8);
  put(&field.spec.t_max, 8);
  put(&field.spec.delta, 8);
  put(&field.spec.seed, 8);
  put(field.values.data(), sizeof(double) * static_cast<std::size_t>(field.values.size()));
  const std::uint32_t crc = crc32(buf.data(), buf.size());
  put(&crc, 4);

  if (std::fwrite(buf.data(), 1, buf.size(), f) != buf.size())
    throw std::runtime_error("save_field: short write to " + path);
}

BrownianField load_field(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_field: cannot open " + path);
  FileCloser closer{f};

  std::fseek(f, 0, SEEK_END);
  const long size = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  if (size < static_cast<long>(sizeof(kMagic) + 40 + 4))
    throw std::runtime_error("load_field: file too short: " + path);
  std::vector<unsigned char> buf(static_cast<std::size_t>(size));
  if (std::fread(buf.data(), 1, buf.size(), f) != buf.size())
    throw std::runtime_error("load_field: short read from " + path);

  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_field: unsupported format version tag");

  std::uint32_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
  if (crc32(buf.data(), buf.size() - 4) != stored)
    throw std::runtime_error("load_field: checksum mismatch (truncated or corrupt file)");

  std::size_t off = sizeof(kMagic);
  auto get = [&buf, &off](void* p, std::size_t n) {
    std::memcpy(p, buf.data() + off, n);
    off += n;
  };
  FieldSpec spec;
  std::int32_t lmin, lmax;
  get(&lmin, 4);
  get(&lmax, 4);
  spec.level_min = lmin;
  spec.level_max = lmax;
  get(&spec.t_min, 8);
  get(&spec.t_max, 8);
  get(&spec.delta, 8);
  get(&spec.seed, 8);
  spec.validate();

  const std::size_t count = static_cast<std::size_t>(spec.levels()) * spec.nodes();
  if (buf.size() != off + sizeof(double) * count + 4)
    throw std::runtime_error("load_field: payload size does not match header");
  BrownianField field;
  field.spec = spec;
  field.values.resize(spec.levels(), spec.nodes());
  get(field.values.data(), sizeof(double) * count);
  return field;
}

}  // namespace blpp
