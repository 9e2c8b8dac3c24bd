#include "renyi/matrix_json.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace renyi::io {

using opalg::Index;
using opalg::Matrix;

json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

void read_part(const json& rows, Index dim, Matrix& m, bool imag) {
  const char* name = imag ? "im" : "re";
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) {
    throw FormatError(std::string("matrix: '") + name + "' must have dim rows");
  }
  for (Index r = 0; r < dim; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw FormatError(std::string("matrix: row of '") + name + "' must have dim entries");
    }
    for (Index c = 0; c < dim; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw FormatError("matrix: entries must be numbers");
      double x = v.get<double>();
      if (imag) {
        m(r, c) += opalg::Complex(0.0, x);
      } else {
        m(r, c) += x;
      }
    }
  }
}

}  // namespace

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw FormatError("matrix: expected object with 'dim' and 're'");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw FormatError("matrix: 'dim' must be a positive integer");
  }
  Index dim = j["dim"].get<Index>();
  Matrix m = Matrix::Zero(dim, dim);
  read_part(j["re"], dim, m, false);
  if (j.contains("im")) read_part(j["im"], dim, m, true);
  return m;
}

opalg::HermitianOperator hermitian_from_json(const json& j) {
  return opalg::HermitianOperator(matrix_from_json(j));
}

opalg::DensityOperator density_from_json(const json& j) {
  return opalg::DensityOperator(hermitian_from_json(j));
}

json pvm_to_json(const opalg::Pvm& pvm) {
  json ps = json::array();
  for (const auto& p : pvm.projectors()) ps.push_back(matrix_to_json(p.matrix()));
  return json{{"projectors", std::move(ps)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

opalg::DensityOperator read_density_file(const std::filesystem::path& path) {
  return density_from_json(read_json_file(path));
}

std::vector<opalg::DensityOperator> read_channel_file(const std::filesystem::path& path) {
  json j = read_json_file(path);
  if (!j.is_object() || !j.contains("d_B") || !j.contains("outputs") || !j["outputs"].is_array() ||
      j["outputs"].empty()) {
    throw FormatError("channel: expected {\"d_B\": n, \"outputs\": [matrix, ...]}");
  }
  Index d = j["d_B"].get<Index>();
  std::vector<opalg::DensityOperator> outs;
  for (const auto& m : j["outputs"]) {
    outs.push_back(density_from_json(m));
    if (outs.back().dim() != d) throw FormatError("channel: output dimension differs from d_B");
  }
  return outs;
}

json channel_to_json(const std::vector<opalg::DensityOperator>& outputs) {
  json outs = json::array();
  for (const auto& o : outputs) outs.push_back(matrix_to_json(o.matrix()));
  return json{{"d_B", outputs.empty() ? 0 : outputs.front().dim()}, {"outputs", std::move(outs)}};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw FormatError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot move output into place: " + ec.message());
  }
}

}  // namespace renyi::io
