#include "coilflow/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "coilflow/errors.hpp"

namespace coilflow {

namespace {

constexpr char kMagic[8] = {'C', 'F', 'L', 'W', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 2;
constexpr std::size_t kTagBytes = 32;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little endian");

class Writer {
 public:
  explicit Writer(std::ofstream& os) : os_(os) {}
  template <typename T>
  void put(T v) {
    os_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { os_.write(p, static_cast<std::streamsize>(n)); }

 private:
  std::ofstream& os_;
};

class Reader {
 public:
  Reader(std::ifstream& is, const std::filesystem::path& path) : is_(is), path_(path) {}
  template <typename T>
  T get() {
    T v{};
    is_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is_) throw IoError("checkpoint " + path_.string() + " is truncated");
    return v;
  }
  void bytes(char* p, std::size_t n) {
    is_.read(p, static_cast<std::streamsize>(n));
    if (!is_) throw IoError("checkpoint " + path_.string() + " is truncated");
  }

 private:
  std::ifstream& is_;
  const std::filesystem::path& path_;
};

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Solver& solver,
                      const UnitScales& scales) {
  const SimulationDomain& d = solver.domain();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write checkpoint " + tmp.string());
    Writer w(os);
    w.bytes(kMagic, sizeof kMagic);
    w.put(kVersion);
    w.put(static_cast<std::uint32_t>(d.dims.nx));
    w.put(static_cast<std::uint32_t>(d.dims.ny));
    w.put(static_cast<std::uint32_t>(d.dims.nz));
    w.put(scales.dx);
    w.put(scales.dt);
    w.put(static_cast<std::uint64_t>(solver.step_index()));
    char tag[kTagBytes] = {};
    const auto t = LatticeDescriptor::ordering_tag;
    std::memcpy(tag, t.data(), std::min(t.size(), kTagBytes));
    w.bytes(tag, kTagBytes);
    const PopulationField& f = solver.populations();
    for (std::size_t g = 0; g < d.dims.size(); ++g) {
      const std::int32_t c = d.grid_to_fluid[g];
      for (int i = 0; i < kQ; ++i) w.put(c >= 0 ? f.at(static_cast<std::size_t>(c), i) : 0.0);
    }
    for (std::size_t c = 0; c < d.fluid_count(); ++c) {
      w.put(solver.mu()[c]);
      w.put(solver.omega()[c]);
      for (int a = 0; a < 3; ++a) w.put(solver.u_prev()[c][a]);
    }
    w.put(static_cast<std::uint64_t>(solver.outlet_history().size()));
    for (double v : solver.outlet_history()) w.put(v);
    os.flush();
    if (!os) throw IoError("failed writing checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

void read_checkpoint(const std::filesystem::path& path, Solver& solver, const UnitScales& scales) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path.string());
  Reader r(is, path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError(path.string() + " is not a checkpoint file");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw IoError("unsupported checkpoint version " + std::to_string(version));
  const SimulationDomain& d = solver.domain();
  const auto nx = r.get<std::uint32_t>(), ny = r.get<std::uint32_t>(), nz = r.get<std::uint32_t>();
  if (static_cast<int>(nx) != d.dims.nx || static_cast<int>(ny) != d.dims.ny ||
      static_cast<int>(nz) != d.dims.nz) {
    throw ConfigError("checkpoint grid does not match the configured geometry");
  }
  const auto dx = r.get<double>(), dt = r.get<double>();
  if (dx != scales.dx || dt != scales.dt) {
    throw ConfigError("checkpoint dx/dt differ from the configuration");
  }
  const auto step = r.get<std::uint64_t>();
  char tag[kTagBytes];
  r.bytes(tag, kTagBytes);
  const auto t = LatticeDescriptor::ordering_tag;
  if (std::string(tag, strnlen(tag, kTagBytes)) != std::string(t)) {
    throw ConfigError("checkpoint uses a different direction ordering");
  }
  PopulationField f(d.fluid_count());
  for (std::size_t g = 0; g < d.dims.size(); ++g) {
    const std::int32_t c = d.grid_to_fluid[g];
    for (int i = 0; i < kQ; ++i) {
      const double v = r.get<double>();
      if (c >= 0) f.at(static_cast<std::size_t>(c), i) = v;
    }
  }
  std::vector<double> mu(d.fluid_count()), omega(d.fluid_count());
  std::vector<Vec3> u(d.fluid_count());
  for (std::size_t c = 0; c < d.fluid_count(); ++c) {
    mu[c] = r.get<double>();
    omega[c] = r.get<double>();
    for (int a = 0; a < 3; ++a) u[c][a] = r.get<double>();
  }
  const auto history_size = r.get<std::uint64_t>();
  if (history_size != solver.outlet_history().size()) {
    throw ConfigError("checkpoint outlet layout does not match the configured geometry");
  }
  std::vector<double> history(history_size);
  for (double& v : history) v = r.get<double>();
  if (is.peek() != std::char_traits<char>::eof()) {
    throw IoError("checkpoint " + path.string() + " has trailing data");
  }
  solver.populations() = std::move(f);
  solver.mu() = std::move(mu);
  solver.omega() = std::move(omega);
  solver.u_prev() = std::move(u);
  solver.outlet_history() = std::move(history);
  solver.set_step_index(static_cast<long>(step));
  solver.update_macroscopic();
}

}  // namespace coilflow
