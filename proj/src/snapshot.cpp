#include "chernflow/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chernflow/error.hpp"

namespace chernflow {
namespace {

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    T value{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw Error(ErrorCode::BadSnapshot, "cannot parse " + std::string(what) + " entry '" + std::string(item) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string_view field_value(const std::string& header, std::string_view key) {
  const std::string token = " " + std::string(key) + "=";
  const auto pos = header.find(token);
  if (pos == std::string::npos) {
    throw Error(ErrorCode::BadSnapshot, "header lacks '" + std::string(key) + "=': " + header);
  }
  const auto start = pos + token.size();
  const auto end = header.find(' ', start);
  return std::string_view(header).substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& field) {
  os << "torus " << field.grid().describe() << '\n';
  char buf[64];
  for (double v : field.values()) {
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    *res.ptr = '\n';
    os.write(buf, res.ptr - buf + 1);
  }
}

ScalarField read_snapshot(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("torus ", 0) != 0) {
    throw Error(ErrorCode::BadSnapshot, "missing 'torus' header line");
  }
  int n = 0;
  {
    const auto nv = field_value(header, "n");
    const auto res = std::from_chars(nv.data(), nv.data() + nv.size(), n);
    if (res.ec != std::errc() || res.ptr != nv.data() + nv.size()) {
      throw Error(ErrorCode::BadSnapshot, "cannot parse n in header: " + header);
    }
  }
  auto points = parse_list<int>(field_value(header, "axes"), "axes");
  auto periods = parse_list<double>(field_value(header, "periods"), "periods");
  TorusGrid grid = make_grid(n, std::move(points), std::move(periods));

  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) {
      throw Error(ErrorCode::BadSnapshot, "cannot parse value '" + line + "'");
    }
    values.push_back(v);
  }
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::BadSnapshot, "expected " + std::to_string(grid.size()) + " values, found " +
                                            std::to_string(values.size()));
  }
  return ScalarField(std::move(grid), std::move(values));
}

void save_snapshot(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::BadSnapshot, "cannot open " + path.string() + " for writing");
  write_snapshot(os, field);
}

ScalarField load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::BadSnapshot, "cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace chernflow
