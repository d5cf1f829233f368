#include "skinspec/cube_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "skinspec/error.hpp"

namespace fs = std::filesystem;

namespace skinspec {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::map<std::string, std::string> read_header(std::istream& in, const fs::path& path,
                                               std::size_t max_lines = SIZE_MAX) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (kv.size() < max_lines && std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail_validation(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                           const fs::path& path) {
  auto it = kv.find(key);
  if (it == kv.end()) fail_validation(path.string() + ": missing header key '" + key + "'");
  return it->second;
}

std::size_t parse_size(const std::string& text, const std::string& key, const fs::path& path) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail_validation(path.string() + ": header key '" + key + "' is not a non-negative integer");
  }
  return v;
}

std::vector<double> parse_wavelengths(const std::string& text, const fs::path& path) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      fail_validation(path.string() + ": bad wavelength '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

fs::path payload_path_for(const fs::path& header_path) {
  fs::path p = header_path;
  p.replace_extension(".raw");
  return p;
}

HsiCube load_cube(const fs::path& header_path) {
  std::ifstream hdr(header_path);
  if (!hdr) fail_io("cannot open cube header " + header_path.string());
  const auto kv = read_header(hdr, header_path);

  const auto width = parse_size(require(kv, "width", header_path), "width", header_path);
  const auto height = parse_size(require(kv, "height", header_path), "height", header_path);
  const auto bands = parse_size(require(kv, "bands", header_path), "bands", header_path);
  if (require(kv, "layout", header_path) != "band-major") {
    fail_validation(header_path.string() + ": only layout=band-major is supported");
  }
  if (require(kv, "dtype", header_path) != "float32") {
    fail_validation(header_path.string() + ": only dtype=float32 is supported");
  }
  auto wl = parse_wavelengths(require(kv, "wavelengths", header_path), header_path);
  if (wl.size() != bands) {
    fail_validation(header_path.string() + ": bands=" + std::to_string(bands) + " but " +
                    std::to_string(wl.size()) + " wavelengths listed");
  }

  fs::path payload = payload_path_for(header_path);
  if (auto it = kv.find("payload"); it != kv.end()) payload = header_path.parent_path() / it->second;
  std::ifstream raw(payload, std::ios::binary);
  if (!raw) fail_io("cannot open cube payload " + payload.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) {
    fail_validation(payload.string() + ": payload size is not a multiple of 4 bytes");
  }
  const std::size_t count = bytes.size() / 4;
  const std::size_t expected = width * height * bands;
  if (count != expected) {
    fail_validation(payload.string() + ": payload carries " + std::to_string(count) +
                    " values, header declares " + std::to_string(expected));
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t u = 0;
    for (int k = 3; k >= 0; --k) u = (u << 8) | static_cast<unsigned char>(bytes[4 * i + k]);
    values[i] = std::bit_cast<float>(u);
  }
  return HsiCube(width, height, WavelengthGrid(std::move(wl)), std::move(values));
}

void save_cube(const HsiCube& cube, const fs::path& header_path) {
  const fs::path payload = payload_path_for(header_path);
  {
    std::ofstream hdr(header_path, std::ios::trunc);
    if (!hdr) fail_io("cannot write cube header " + header_path.string());
    hdr << "width=" << cube.width() << '\n'
        << "height=" << cube.height() << '\n'
        << "bands=" << cube.bands() << '\n'
        << "layout=band-major\n"
        << "dtype=float32\n"
        << "wavelengths=";
    const auto c = cube.grid().centers();
    for (std::size_t i = 0; i < c.size(); ++i) hdr << (i ? "," : "") << format_double(c[i]);
    hdr << '\n';
    if (!hdr) fail_io("failed writing " + header_path.string());
  }
  std::vector<char> bytes(cube.values().size() * 4);
  for (std::size_t i = 0; i < cube.values().size(); ++i) {
    auto u = std::bit_cast<std::uint32_t>(cube.values()[i]);
    for (int k = 0; k < 4; ++k) {
      bytes[4 * i + k] = static_cast<char>(u & 0xFFu);
      u >>= 8;
    }
  }
  std::ofstream raw(payload, std::ios::binary | std::ios::trunc);
  if (!raw) fail_io("cannot write cube payload " + payload.string());
  raw.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!raw) fail_io("failed writing " + payload.string());
}

AnnotationMask load_mask(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open mask " + path.string());
  const auto kv = read_header(in, path, 2);
  const auto width = parse_size(require(kv, "width", path), "width", path);
  const auto height = parse_size(require(kv, "height", path), "height", path);

  std::vector<std::uint8_t> bits;
  bits.reserve(width * height);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() != width) {
      fail_validation(path.string() + ": mask row " + std::to_string(rows) + " has " +
                      std::to_string(line.size()) + " columns, expected " + std::to_string(width));
    }
    for (char ch : line) {
      if (ch != '0' && ch != '1') fail_validation(path.string() + ": mask rows must contain only 0/1");
      bits.push_back(ch == '1');
    }
    ++rows;
  }
  if (rows != height) {
    fail_validation(path.string() + ": mask has " + std::to_string(rows) + " rows, header declares " +
                    std::to_string(height));
  }
  return AnnotationMask(width, height, std::move(bits));
}

void save_mask(const AnnotationMask& mask, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail_io("cannot write mask " + path.string());
  out << "width=" << mask.width() << "\nheight=" << mask.height() << '\n';
  for (std::size_t r = 0; r < mask.height(); ++r) {
    for (std::size_t c = 0; c < mask.width(); ++c) out << (mask.included(r, c) ? '1' : '0');
    out << '\n';
  }
  if (!out) fail_io("failed writing " + path.string());
}

}  // namespace skinspec
