#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fclab/assembly.hpp"

namespace fclab {

// All numeric output goes through this: %.17g round-trips doubles exactly,
// which is what makes rerun outputs byte-identical.
std::string format_num(double v);
std::string format_num(long long v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Rows (node, x0[, x1], region, <columns...>) for one or more grid functions.
void write_grid_function_csv(const std::filesystem::path& path, const Grid& grid,
                             const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& cols);

// Flat JSON object with sorted keys and string values; no timestamps, so the
// bytes depend only on the content.
void write_manifest(const std::filesystem::path& path,
                    const std::map<std::string, std::string>& entries);

void save_matrix_csv(const std::filesystem::path& path, const NonlocalMatrix& m);
void save_matrix_binary(const std::filesystem::path& path, const NonlocalMatrix& m);
NonlocalMatrix load_matrix_binary(const std::filesystem::path& path);

}  // namespace fclab
