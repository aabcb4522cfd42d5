// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "curlvar/maxwell.hpp"

namespace curlvar::cli {

/// Writes `content` to `<path>.tmp` and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// CSV with header r,z,u in grid order; numbers use %.17g.
std::string solution_csv(const ScalarField& u);
/// Parses solution_csv output; every (r, z) must match `grid` to 1e-12.
ScalarField parse_solution_csv(const std::string& text, GridPtr grid);
ScalarField read_solution_csv(const std::filesystem::path& path, GridPtr grid);

/// CSV with header t,J.
std::string ray_csv(std::span<const double> t, std::span<const double> values);

/// CSV with header x1,x2,x3,E1,E2,E3.
std::string field3_csv(const VectorField3& e);

}  // namespace curlvar::cli
