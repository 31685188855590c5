#include "fclab/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fclab {

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_num(long long v) { return std::to_string(v); }

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void write_grid_function_csv(const std::filesystem::path& path, const Grid& grid,
                             const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& cols) {
  std::vector<std::string> header{"node", "x0"};
  if (grid.dim() == 2) header.push_back("x1");
  header.push_back("region");
  for (const auto& [name, vec] : cols) {
    if (static_cast<std::size_t>(vec->size()) != grid.size())
      throw std::invalid_argument("write_grid_function_csv: column size mismatch");
    header.push_back(name);
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(std::to_string(i));
    row.push_back(format_num(grid.coords[i][0]));
    if (grid.dim() == 2) row.push_back(format_num(grid.coords[i][1]));
    row.push_back(grid.is_interior(i) ? "interior" : "exterior");
    for (const auto& [name, vec] : cols) {
      row.push_back(format_num((*vec)[static_cast<Eigen::Index>(i)]));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_manifest(const std::filesystem::path& path,
                    const std::map<std::string, std::string>& entries) {
  std::ofstream out = open_out(path);
  out << "{\n";
  std::size_t k = 0;
  for (const auto& [key, value] : entries) {
    out << "  \"" << json_escape(key) << "\": \"" << json_escape(value) << "\"";
    if (++k < entries.size()) out << ',';
    out << '\n';
  }
  out << "}\n";
}

void save_matrix_csv(const std::filesystem::path& path, const NonlocalMatrix& m) {
  std::ofstream out = open_out(path);
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      const double v = m.values(i, j);
      if (v == 0.0) continue;
      out << i << ',' << j << ',' << format_num(v) << '\n';
    }
  }
}

namespace {
constexpr char kMagic[8] = {'F', 'C', 'L', 'A', 'B', 'M', '0', '1'};
}

void save_matrix_binary(const std::filesystem::path& path, const NonlocalMatrix& m) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  auto put = [&out](const void* p, std::size_t n) { out.write(static_cast<const char*>(p), n); };
  const std::int64_t dim = m.dim;
  const std::int64_t rows = m.values.rows();
  const std::int64_t cols = m.values.cols();
  put(&dim, sizeof dim);
  put(&m.params.s, sizeof m.params.s);
  put(&m.params.norm_const, sizeof m.params.norm_const);
  put(&m.spacing, sizeof m.spacing);
  put(&m.grid_hash, sizeof m.grid_hash);
  put(&m.potential_hash, sizeof m.potential_hash);
  const std::int64_t slen = static_cast<std::int64_t>(m.scheme.size());
  put(&slen, sizeof slen);
  put(m.scheme.data(), m.scheme.size());
  put(&rows, sizeof rows);
  put(&cols, sizeof cols);
  put(m.values.data(), sizeof(double) * static_cast<std::size_t>(rows * cols));
}

NonlocalMatrix load_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("not a matrix file: " + path.string());
  auto get = [&in, &path](void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("truncated matrix file: " + path.string());
  };
  NonlocalMatrix m;
  std::int64_t dim = 0, rows = 0, cols = 0, slen = 0;
  get(&dim, sizeof dim);
  get(&m.params.s, sizeof m.params.s);
  get(&m.params.norm_const, sizeof m.params.norm_const);
  get(&m.spacing, sizeof m.spacing);
  get(&m.grid_hash, sizeof m.grid_hash);
  get(&m.potential_hash, sizeof m.potential_hash);
  get(&slen, sizeof slen);
  if (slen < 0 || slen > 64) throw std::runtime_error("corrupt matrix file: " + path.string());
  m.scheme.resize(static_cast<std::size_t>(slen));
  if (slen > 0) get(m.scheme.data(), static_cast<std::size_t>(slen));
  get(&rows, sizeof rows);
  get(&cols, sizeof cols);
  if (rows <= 0 || cols <= 0 || rows != cols || rows > (1 << 20))
    throw std::runtime_error("corrupt matrix file: " + path.string());
  m.dim = static_cast<int>(dim);
  m.params.dim = m.dim;
  m.values.resize(rows, cols);
  get(m.values.data(), sizeof(double) * static_cast<std::size_t>(rows * cols));
  return m;
}

}  // namespace fclab
