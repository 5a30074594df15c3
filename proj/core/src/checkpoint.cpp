#include "gadforge/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gadforge/error.hpp"

namespace gadforge {

namespace {

constexpr char kMagic[8] = {'G', 'A', 'D', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename U>
void put(std::ostream& out, U value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(U));
}

void put_str(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename U>
U get(std::istream& in) {
  U value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(U)))
    throw Error(ErrorKind::Parse, "checkpoint truncated");
  return value;
}

std::string get_str(std::istream& in) {
  const auto len = get<std::uint32_t>(in);
  if (len > (1u << 20)) throw Error(ErrorKind::Parse, "checkpoint string too long");
  std::string s(len, '\0');
  if (!in.read(s.data(), len)) throw Error(ErrorKind::Parse, "checkpoint truncated");
  return s;
}

template <typename T>
struct Section {
  const char* prefix;
  Weights<T>* weights;
};

}  // namespace

template <typename T>
void write_checkpoint(std::ostream& out, const Checkpoint<T>& ckpt) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, sizeof(T));
  const ModelShape& s = ckpt.params.shape;
  for (const std::size_t x : {s.input_dim, s.hidden, s.head_hidden, s.num_synthetic})
    put<std::uint64_t>(out, x);
  put<std::uint64_t>(out, ckpt.params.adam.step);
  put<std::uint64_t>(out, ckpt.epoch);
  put_str(out, ckpt.phase);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.rng.size()));
  for (const auto& r : ckpt.rng) {
    put_str(out, r.name);
    put<std::uint64_t>(out, r.key);
    put<std::uint64_t>(out, r.counter);
  }

  auto& p = const_cast<ModelParams<T>&>(ckpt.params);
  const Section<T> sections[] = {{"param/", &p.weights}, {"adam.m/", &p.adam.first},
                                 {"adam.v/", &p.adam.second}};
  std::uint32_t count = 0;
  for (const auto& sec : sections) count += static_cast<std::uint32_t>(sec.weights->tensors().size());
  put<std::uint32_t>(out, count);
  for (const auto& sec : sections) {
    for (const auto& ref : sec.weights->tensors()) {
      put_str(out, sec.prefix + ref.name);
      put<std::uint64_t>(out, ref.tensor->rows());
      put<std::uint64_t>(out, ref.tensor->cols());
      out.write(reinterpret_cast<const char*>(ref.tensor->data()),
                static_cast<std::streamsize>(ref.tensor->size() * sizeof(T)));
    }
  }
}

template <typename T>
Checkpoint<T> read_checkpoint(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::Parse, "not a checkpoint file");
  if (get<std::uint32_t>(in) != kVersion) throw Error(ErrorKind::Parse, "unsupported checkpoint version");
  if (get<std::uint32_t>(in) != sizeof(T))
    throw Error(ErrorKind::Parse, "checkpoint scalar width does not match the requested precision");

  Checkpoint<T> ckpt;
  ModelShape& s = ckpt.params.shape;
  s.input_dim = get<std::uint64_t>(in);
  s.hidden = get<std::uint64_t>(in);
  s.head_hidden = get<std::uint64_t>(in);
  s.num_synthetic = get<std::uint64_t>(in);
  if (s.hidden > (1u << 16) || s.head_hidden > (1u << 16) || s.input_dim > (1u << 24) ||
      s.num_synthetic > 64)
    throw Error(ErrorKind::Parse, "implausible model shape in checkpoint");
  ckpt.params.weights = Weights<T>::zeros(s);
  ckpt.params.reset_adam();
  ckpt.params.adam.step = get<std::uint64_t>(in);
  ckpt.epoch = get<std::uint64_t>(in);
  ckpt.phase = get_str(in);
  const auto n_rng = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_rng; ++i) {
    RngState r;
    r.name = get_str(in);
    r.key = get<std::uint64_t>(in);
    r.counter = get<std::uint64_t>(in);
    ckpt.rng.push_back(std::move(r));
  }

  const Section<T> sections[] = {{"param/", &ckpt.params.weights},
                                 {"adam.m/", &ckpt.params.adam.first},
                                 {"adam.v/", &ckpt.params.adam.second}};
  std::uint32_t expected = 0;
  for (const auto& sec : sections) expected += static_cast<std::uint32_t>(sec.weights->tensors().size());
  if (get<std::uint32_t>(in) != expected) throw Error(ErrorKind::Parse, "checkpoint tensor count mismatch");
  for (const auto& sec : sections) {
    for (auto& ref : sec.weights->tensors()) {
      const std::string name = get_str(in);
      if (name != sec.prefix + ref.name)
        throw Error(ErrorKind::Parse, "checkpoint tensor '" + name + "' where '" + sec.prefix + ref.name + "' expected");
      const auto rows = get<std::uint64_t>(in);
      const auto cols = get<std::uint64_t>(in);
      if (rows != ref.tensor->rows() || cols != ref.tensor->cols())
        throw Error(ErrorKind::Parse, "checkpoint tensor '" + name + "' has wrong shape");
      if (!in.read(reinterpret_cast<char*>(ref.tensor->data()),
                   static_cast<std::streamsize>(ref.tensor->size() * sizeof(T))))
        throw Error(ErrorKind::Parse, "checkpoint truncated");
    }
  }
  return ckpt;
}

template <typename T>
void save_checkpoint(const std::filesystem::path& path, const Checkpoint<T>& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_checkpoint(out, ckpt);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

template <typename T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_checkpoint<T>(in);
}

template void write_checkpoint<float>(std::ostream&, const Checkpoint<float>&);
template void write_checkpoint<double>(std::ostream&, const Checkpoint<double>&);
template Checkpoint<float> read_checkpoint<float>(std::istream&);
template Checkpoint<double> read_checkpoint<double>(std::istream&);
template void save_checkpoint<float>(const std::filesystem::path&, const Checkpoint<float>&);
template void save_checkpoint<double>(const std::filesystem::path&, const Checkpoint<double>&);
template Checkpoint<float> load_checkpoint<float>(const std::filesystem::path&);
template Checkpoint<double> load_checkpoint<double>(const std::filesystem::path&);

}  // namespace gadforge
