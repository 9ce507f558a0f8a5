#include "infosample/fieldio.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "infosample/error.hpp"

namespace infosample::io {
namespace {

namespace fs = std::filesystem;

std::vector<char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for '" + path.string() + "'");
  return bytes;
}

void write_all(const fs::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

template <typename T>
void put_le(std::vector<char>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<char>((u >> (8 * b)) & 0xFF));
  }
}

void put_f32(std::vector<char>& out, double value) {
  put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(value)));
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    std::make_unsigned_t<T> u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
      u |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(bytes_[pos_ + b]))
           << (8 * b);
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  float get_f32(const char* what) { return std::bit_cast<float>(get<std::uint32_t>(what)); }
  std::string get_string(std::size_t n, const char* what) {
    need(n, what);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw Error(ErrorKind::MalformedHeader, std::string("truncated point-set file reading ") + what);
    }
  }
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

float f32_at(const std::vector<char>& bytes, std::size_t i) {
  std::uint32_t u = 0;
  for (std::size_t b = 0; b < 4; ++b) {
    u |= std::uint32_t{static_cast<unsigned char>(bytes[4 * i + b])} << (8 * b);
  }
  return std::bit_cast<float>(u);
}

}  // namespace

Field load_field(const fs::path& path, const GridDims& dims, const std::string& name) {
  const auto bytes = read_all(path);
  const std::uint64_t expected = dims.count() * 4;
  if (bytes.size() != expected) {
    throw SizeMismatchError(expected, bytes.size(), "brick '" + path.string() + "' byte size");
  }
  std::vector<double> values(dims.count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float v = f32_at(bytes, i);
    if (!std::isfinite(v)) throw NonFiniteValueError(i);
    values[i] = v;
  }
  return Field(name, dims, std::move(values));
}

void save_field(const Field& field, const fs::path& path) {
  std::vector<char> bytes;
  bytes.reserve(field.values.size() * 4);
  for (double v : field.values) put_f32(bytes, v);
  write_all(path, bytes);
}

void save_pointset(const SampledPointSet& ps, const fs::path& path) {
  ps.validate();
  const auto& names = ps.variable_names();
  std::vector<char> out;
  out.reserve(32 + ps.size() * (8 + 4 * names.size()));
  out.insert(out.end(), std::begin(kPointSetMagic), std::end(kPointSetMagic));
  put_le<std::uint16_t>(out, kPointSetVersion);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(names.size()));
  put_le<std::uint64_t>(out, ps.size());
  put_le<std::uint32_t>(out, ps.dims().nx());
  put_le<std::uint32_t>(out, ps.dims().ny());
  put_le<std::uint32_t>(out, ps.dims().nz());
  for (const auto& n : names) {
    if (n.size() > 0xFFFF) throw Error(ErrorKind::InvalidArgument, "variable name too long");
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(n.size()));
    out.insert(out.end(), n.begin(), n.end());
  }
  for (std::size_t p = 0; p < ps.size(); ++p) {
    put_le<std::uint64_t>(out, ps.indices()[p]);
    for (std::size_t v = 0; v < names.size(); ++v) put_f32(out, ps.column(v)[p]);
  }
  write_all(path, out);
}

SampledPointSet load_pointset(const fs::path& path) {
  const auto bytes = read_all(path);
  Reader r(bytes);
  const std::string magic = r.get_string(4, "magic");
  if (std::memcmp(magic.data(), kPointSetMagic, 4) != 0) {
    throw Error(ErrorKind::MalformedHeader, "bad magic in '" + path.string() + "'");
  }
  const auto version = r.get<std::uint16_t>("version");
  if (version != kPointSetVersion) {
    throw Error(ErrorKind::MalformedHeader, "unsupported version " + std::to_string(version));
  }
  if (r.get<std::uint16_t>("reserved") != 0) {
    throw Error(ErrorKind::MalformedHeader, "reserved field must be zero");
  }
  const auto n_vars = r.get<std::uint32_t>("variable count");
  const auto n_points = r.get<std::uint64_t>("point count");
  const auto nx = r.get<std::uint32_t>("nx");
  const auto ny = r.get<std::uint32_t>("ny");
  const auto nz = r.get<std::uint32_t>("nz");
  if (nx == 0 || ny == 0 || nz == 0) throw Error(ErrorKind::MalformedHeader, "zero grid extent");
  std::vector<std::string> names;
  for (std::uint32_t v = 0; v < n_vars; ++v) {
    const auto len = r.get<std::uint16_t>("name length");
    names.push_back(r.get_string(len, "name"));
  }
  const std::uint64_t record = 8 + 4ULL * n_vars;
  if (n_points > r.remaining() / record || r.remaining() != n_points * record) {
    throw Error(ErrorKind::MalformedHeader, "point records do not match header count");
  }
  SampledPointSet ps(GridDims(nx, ny, nz), names);
  std::vector<double> values(n_vars);
  for (std::uint64_t p = 0; p < n_points; ++p) {
    const auto idx = r.get<std::uint64_t>("linear index");
    for (std::uint32_t v = 0; v < n_vars; ++v) values[v] = r.get_f32("value");
    try {
      ps.push_back(idx, values);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedHeader, std::string("invalid point record: ") + e.what());
    }
  }
  return ps;
}

Sidecar read_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open sidecar '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
    Sidecar s;
    const auto dims = j.at("dims").get<std::vector<std::int64_t>>();
    if (dims.size() != 3 || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
      throw Error(ErrorKind::SchemaError, "sidecar dims must be three positive integers");
    }
    s.dims = GridDims(static_cast<std::uint32_t>(dims[0]), static_cast<std::uint32_t>(dims[1]),
                      static_cast<std::uint32_t>(dims[2]));
    for (const auto& v : j.at("variables")) {
      s.variables.push_back({v.at("name").get<std::string>(), v.at("file").get<std::string>()});
    }
    if (s.variables.empty()) throw Error(ErrorKind::SchemaError, "sidecar lists no variables");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, "sidecar '" + path.string() + "': " + e.what());
  }
}

void write_sidecar(const Sidecar& s, const fs::path& path) {
  nlohmann::json j;
  j["dims"] = {s.dims.nx(), s.dims.ny(), s.dims.nz()};
  j["variables"] = nlohmann::json::array();
  for (const auto& v : s.variables) j["variables"].push_back({{"name", v.name}, {"file", v.file}});
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create sidecar '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

MultiField load_multifield(const fs::path& sidecar_path) {
  const Sidecar s = read_sidecar(sidecar_path);
  const fs::path base = sidecar_path.parent_path();
  std::vector<Field> fields;
  for (const auto& v : s.variables) {
    fields.push_back(load_field(base / v.file, s.dims, v.name));
  }
  return MultiField(s.dims, std::move(fields));
}

void save_multifield(const MultiField& mf, const fs::path& sidecar_path) {
  const fs::path base = sidecar_path.parent_path();
  if (!base.empty()) fs::create_directories(base);
  Sidecar s{mf.dims(), {}};
  for (const auto& f : mf.variables()) {
    const std::string file = sidecar_path.stem().string() + "_" + f.name + ".f32";
    save_field(f, base / file);
    s.variables.push_back({f.name, file});
  }
  write_sidecar(s, sidecar_path);
}

void save_indices(const std::vector<std::uint64_t>& indices, const fs::path& path) {
  std::vector<char> out;
  out.reserve(indices.size() * 8);
  for (auto i : indices) put_le<std::uint64_t>(out, i);
  write_all(path, out);
}

std::vector<std::uint64_t> load_indices(const fs::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() % 8 != 0) {
    throw SizeMismatchError(bytes.size() / 8 * 8 + 8, bytes.size(), "index file byte size");
  }
  Reader r(bytes);
  std::vector<std::uint64_t> out(bytes.size() / 8);
  for (auto& i : out) i = r.get<std::uint64_t>("index");
  return out;
}

bool is_pointset_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::memcmp(magic, kPointSetMagic, 4) == 0;
}

}  // namespace infosample::io
