#include "conedecay/measures.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace conedecay {

namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ofstream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("read_atoms: truncated file");
  return to_little(v);
}

}  // namespace

// Layout: u32 dim, u64 count, then per atom dim f64 position, f64 weight and
// the parameter coordinates. The parameter count is not in the header; it is
// recovered from the file length.
void write_atoms(const ParticleMeasure& mu, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_atoms: cannot open " + path);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(mu.ambient_dim()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(mu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (int j = 0; j < mu.ambient_dim(); ++j) put<double>(out, mu.coord(j)[i]);
    put<double>(out, mu.weight(i));
    for (int j = 0; j < mu.param_dim(); ++j) put<double>(out, mu.param(j)[i]);
  }
  if (!out) throw IoError("write_atoms: write failed for " + path);
}

ParticleMeasure read_atoms(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("read_atoms: cannot open " + path);
  const auto bytes = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);
  const auto dim = get<std::uint32_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (dim < 1 || dim > static_cast<std::uint32_t>(kMaxDim)) throw IoError("read_atoms: bad dimension");
  const std::uint64_t body = bytes - 12;
  int param_dim = 0;
  if (count > 0) {
    if (body % (8 * count) != 0) throw IoError("read_atoms: size does not match atom count");
    const std::uint64_t per = body / (8 * count);
    if (per < dim + 1 || per > dim + 1 + kMaxDim) throw IoError("read_atoms: bad record width");
    param_dim = static_cast<int>(per - dim - 1);
  } else if (body != 0) {
    throw IoError("read_atoms: trailing bytes");
  }
  ParticleMeasure mu(static_cast<int>(dim), param_dim);
  mu.reserve(count);
  Vec p(dim), q(param_dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) p(j) = get<double>(in);
    const double w = get<double>(in);
    for (int j = 0; j < param_dim; ++j) q(j) = get<double>(in);
    mu.add(p, w, q);
  }
  return mu;
}

}  // namespace conedecay
