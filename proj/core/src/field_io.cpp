#include "nsf/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>

namespace nsf {

namespace {

constexpr std::array<char, 4> kMagic{'N', 'S', 'F', '3'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_or_throw(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  return f;
}

void close_or_throw(File f, const std::filesystem::path& path) {
  if (std::ferror(f.get()) || std::fclose(f.release()) != 0)
    throw std::runtime_error("write failed for " + path.string());
}

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

template <class T>
void put(std::FILE* f, T v) {
  v = to_little(v);
  std::fwrite(&v, sizeof(T), 1, f);
}

template <class T>
T get(std::FILE* f, const std::filesystem::path& path) {
  T v;
  if (std::fread(&v, sizeof(T), 1, f) != 1) throw std::runtime_error("truncated snapshot " + path.string());
  return to_little(v);
}

}  // namespace

void write_state1d_csv(const std::filesystem::path& path, const State1D& s) {
  auto f = open_or_throw(path, "w");
  std::fputs("y,rho,u,theta\n", f.get());
  for (int i = 0; i < s.n; ++i)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g\n", s.y(i), s.rho[i], s.u[i], s.theta[i]);
  close_or_throw(std::move(f), path);
}

void write_diagnostics1d_csv(const std::filesystem::path& path, std::span<const BalanceDiagnostics1D> rows) {
  auto f = open_or_throw(path, "w");
  std::fputs("t,mass,energy,entropy_production_min\n", f.get());
  for (const auto& d : rows)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g\n", d.t, d.mass, d.energy, d.entropy_production_min);
  close_or_throw(std::move(f), path);
}

void write_state3d_csv(const std::filesystem::path& path, const State3D& s) {
  const Grid3D& g = s.grid;
  auto f = open_or_throw(path, "w");
  std::fputs("i,j,k,x1,x2,y,rho,u1,u2,u3,theta\n", f.get());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const std::size_t c = g.index(i, j, k);
        std::fprintf(f.get(), "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, j, k, g.x1(i), g.x2(j),
                     g.y(k), s.rho[c], s.u1[c], s.u2[c], s.u3[c], s.theta[c]);
      }
  close_or_throw(std::move(f), path);
}

void write_balance3d_csv(const std::filesystem::path& path, std::span<const Balance3D> rows) {
  auto f = open_or_throw(path, "w");
  std::fputs("t,mass,energy,entropy,production,sigma_integral,sigma_min\n", f.get());
  for (const auto& b : rows)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", b.t, b.mass, b.energy, b.entropy,
                 b.production, b.sigma_integral, b.sigma_min);
  close_or_throw(std::move(f), path);
}

void write_state3d_binary(const std::filesystem::path& path, const State3D& s) {
  const Grid3D& g = s.grid;
  auto f = open_or_throw(path, "wb");
  std::fwrite(kMagic.data(), 1, kMagic.size(), f.get());
  put<std::uint32_t>(f.get(), kVersion);
  for (int n : {g.n1, g.n2, g.n3}) put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(n));
  for (double x : {g.epsilon, s.t, g.q.a, g.q.b, g.q.c, g.q.d}) put<double>(f.get(), x);
  for (const auto* field : {&s.rho, &s.u1, &s.u2, &s.u3, &s.theta})
    for (double x : *field) put<double>(f.get(), x);
  close_or_throw(std::move(f), path);
}

State3D read_state3d_binary(const std::filesystem::path& path) {
  auto f = open_or_throw(path, "rb");
  std::array<char, 4> magic{};
  if (std::fread(magic.data(), 1, magic.size(), f.get()) != magic.size() || magic != kMagic)
    throw std::runtime_error("not an NSF3 snapshot: " + path.string());
  const auto version = get<std::uint32_t>(f.get(), path);
  if (version != kVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version) + " in " + path.string());
  GridPolicy policy;
  policy.n1 = static_cast<int>(get<std::uint32_t>(f.get(), path));
  policy.n2 = static_cast<int>(get<std::uint32_t>(f.get(), path));
  policy.n3 = static_cast<int>(get<std::uint32_t>(f.get(), path));
  const double eps = get<double>(f.get(), path);
  const double t = get<double>(f.get(), path);
  CrossSection q;
  q.a = get<double>(f.get(), path);
  q.b = get<double>(f.get(), path);
  q.c = get<double>(f.get(), path);
  q.d = get<double>(f.get(), path);
  State3D s(build_domain(q, eps, policy));
  s.t = t;
  for (auto* field : {&s.rho, &s.u1, &s.u2, &s.u3, &s.theta})
    for (double& x : *field) x = get<double>(f.get(), path);
  return s;
}

}  // namespace nsf
