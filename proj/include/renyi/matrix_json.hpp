#pragma once

// Matrix exchange format shared by the CLI and test fixtures:
//   {"dim": n, "re": [[...], ...], "im": [[...], ...]}   (row-major; "im" optional)
// Channel files:
//   {"d_B": n, "outputs": [matrix, ...]}

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/opalg.hpp"

namespace renyi::io {

using json = nlohmann::json;

/// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json matrix_to_json(const opalg::Matrix& m);
opalg::Matrix matrix_from_json(const json& j);

opalg::HermitianOperator hermitian_from_json(const json& j);
opalg::DensityOperator density_from_json(const json& j);

json pvm_to_json(const opalg::Pvm& pvm);

json read_json_file(const std::filesystem::path& path);
opalg::DensityOperator read_density_file(const std::filesystem::path& path);
std::vector<opalg::DensityOperator> read_channel_file(const std::filesystem::path& path);

json channel_to_json(const std::vector<opalg::DensityOperator>& outputs);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace renyi::io
