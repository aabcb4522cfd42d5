// SPDX-License-Identifier: Apache-2.0
#include "curlvar_cli/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "curlvar/error.hpp"

namespace curlvar::cli {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::io, "cannot open '" + tmp.string() + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw Error(ErrorKind::io, "failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string solution_csv(const ScalarField& u) {
  const Grid& g = u.grid();
  std::string out = "r,z,u\n";
  out.reserve(g.size() * 64);
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_z(); ++j) out += fmt::format("{:.17g},{:.17g},{:.17g}\n", g.r(i), g.z(j), u(i, j));
  }
  return out;
}

ScalarField parse_solution_csv(const std::string& text, GridPtr grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,z,u", 0) != 0) {
    throw Error(ErrorKind::io, "solution CSV must start with the header r,z,u");
  }
  ScalarField u(grid);
  const Grid& g = *grid;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (count >= g.size()) throw Error(ErrorKind::io, "solution CSV has more rows than the grid");
    double vals[3];
    const char* p = line.c_str();
    for (int c = 0; c < 3; ++c) {
      char* end = nullptr;
      vals[c] = std::strtod(p, &end);
      if (end == p) throw Error(ErrorKind::io, "malformed solution CSV row: " + line);
      p = end;
      if (c < 2) {
        if (*p != ',') throw Error(ErrorKind::io, "malformed solution CSV row: " + line);
        ++p;
      }
    }
    const int i = static_cast<int>(count / static_cast<std::size_t>(g.n_z()));
    const int j = static_cast<int>(count % static_cast<std::size_t>(g.n_z()));
    if (std::abs(vals[0] - g.r(i)) > 1e-12 * (1.0 + g.r(i)) || std::abs(vals[1] - g.z(j)) > 1e-12 * (1.0 + g.z(j))) {
      throw Error(ErrorKind::io, fmt::format("solution CSV row {} does not match the configured grid", count + 2));
    }
    u(i, j) = vals[2];
    ++count;
  }
  if (count != g.size()) throw Error(ErrorKind::io, "solution CSV has fewer rows than the grid");
  if (!u.is_finite()) throw Error(ErrorKind::non_finite, "solution CSV contains non-finite values");
  return u;
}

ScalarField read_solution_csv(const std::filesystem::path& path, GridPtr grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot read solution '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_solution_csv(ss.str(), std::move(grid));
}

std::string ray_csv(std::span<const double> t, std::span<const double> values) {
  std::string out = "t,J\n";
  for (std::size_t k = 0; k < t.size(); ++k) out += fmt::format("{:.17g},{:.17g}\n", t[k], values[k]);
  return out;
}

std::string field3_csv(const VectorField3& e) {
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  std::string out = "x1,x2,x3,E1,E2,E3\n";
  for (int i = 0; i < g.n_r(); ++i) {
    for (int k = 0; k < s.n_theta(); ++k) {
      for (int j = 0; j < g.n_z(); ++j) {
        const auto v = e.at(s.index(i, k, j));
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", g.r(i) * s.cos_theta(k),
                           g.r(i) * s.sin_theta(k), g.z(j), v[0], v[1], v[2]);
      }
    }
  }
  return out;
}

}  // namespace curlvar::cli
