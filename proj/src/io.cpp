#include "stillwater/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace stillwater {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::vector<char>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    unsigned char b[sizeof(T)];
    std::memcpy(b, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    if constexpr (std::endian::native == std::endian::big)
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
  }

  std::string string(std::size_t n) {
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  [[nodiscard]] bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("SWF1: unexpected end of data");
  }
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const Field& FieldFile::get(const std::string& name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return f;
  throw FormatError("SWF1: no field named \"" + name + "\"");
}

bool FieldFile::has(const std::string& name) const {
  for (const auto& entry : fields)
    if (entry.first == name) return true;
  return false;
}

std::vector<char> encode_field_file(const FieldFile& file) {
  const Grid& g = file.grid;
  std::vector<char> out(std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.size(0)));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.size(1)));
  put<double>(out, g.length(0));
  put<double>(out, g.length(1));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(file.fields.size()));
  for (const auto& [name, f] : file.fields) {
    require_same_grid(g, f.grid(), "SWF1 writer");
    if (name.size() > 0xffff) throw FormatError("SWF1: field name too long");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    for (double v : f.samples()) put<double>(out, v);
  }
  return out;
}

FieldFile decode_field_file(const std::vector<char>& bytes) {
  Reader r(bytes);
  if (r.string(4) != std::string(kMagic, 4)) throw FormatError("SWF1: bad magic");
  if (r.get<std::uint32_t>() != kVersion) throw FormatError("SWF1: unsupported version");
  const auto n1 = r.get<std::uint32_t>();
  const auto n2 = r.get<std::uint32_t>();
  const double l1 = r.get<double>();
  const double l2 = r.get<double>();
  if (n1 > (1u << 16) || n2 > (1u << 16)) throw FormatError("SWF1: implausible grid size");
  Grid grid = [&] {
    try {
      return Grid(l1, l2, static_cast<int>(n1), static_cast<int>(n2));
    } catch (const BadSpec& e) {
      throw FormatError(std::string("SWF1: ") + e.what());
    }
  }();
  const auto count = r.get<std::uint32_t>();
  FieldFile file{grid, {}};
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint16_t>();
    std::string name = r.string(len);
    std::vector<double> s(grid.num_points());
    for (double& v : s) v = r.get<double>();
    try {
      file.fields.emplace_back(std::move(name), Field(grid, std::move(s)));
    } catch (const NonFiniteValue&) {
      throw FormatError("SWF1: non-finite sample");
    }
  }
  if (!r.done()) throw FormatError("SWF1: trailing bytes");
  return file;
}

void write_field_file(const std::filesystem::path& path, const FieldFile& file) {
  const auto bytes = encode_field_file(file);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("SWF1: cannot open " + path.string() + " for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("SWF1: write failed for " + path.string());
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("SWF1: cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_field_file(bytes);
}

}  // namespace stillwater
