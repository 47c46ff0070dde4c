#include "risim/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "risim/config.hpp"
#include "risim/errors.hpp"

namespace risim::io {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'I', 'S', 'M', 'A', 'T', '0', '1'};

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is, const std::filesystem::path& path) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated matrix file '" + path.string() + "'");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  put_u64(os, bits);
}

double get_f64(std::istream& is, const std::filesystem::path& path) {
  const std::uint64_t bits = get_u64(is, path);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError("'" + path.string() + "': '" + text + "' is not a number");
}

// Data lines of a CSV file with the header (and '#' lines) removed.
std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                    std::vector<std::string>* comments = nullptr) {
  auto in = open_in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (comments) comments->push_back(line);
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(split_trimmed(line, ','));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_matrix_binary(const std::filesystem::path& path, const CMatrix& m) {
  auto out = open_out(path, true);
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      put_f64(out, m(i, j).real());
      put_f64(out, m(i, j).imag());
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CMatrix read_matrix_binary(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("'" + path.string() + "' is not a RISMAT01 matrix file");
  }
  const auto rows = get_u64(in, path);
  const auto cols = get_u64(in, path);
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = get_f64(in, path);
      const double im = get_f64(in, path);
      m(i, j) = {re, im};
    }
  }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const CMatrix& m) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out << (j ? "," : "") << "re" << j << ",im" << j;
  }
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CMatrix read_matrix_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path);
  if (rows.empty()) return CMatrix(0, 0);
  const auto width = rows.front().size();
  if (width % 2 != 0) throw IoError("'" + path.string() + "': odd number of re/im columns");
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width / 2));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) throw IoError("'" + path.string() + "': ragged matrix row");
    for (std::size_t j = 0; j < width / 2; ++j) {
      m(i, j) = {parse_double(rows[i][2 * j], path), parse_double(rows[i][2 * j + 1], path)};
    }
  }
  return m;
}

void write_vector_csv(const std::filesystem::path& path, const CVector& v) {
  auto out = open_out(path);
  out << "index,re,im\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << i << "," << format_double(v(i).real()) << "," << format_double(v(i).imag()) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CVector read_vector_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path);
  CVector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() < 3) throw IoError("'" + path.string() + "': expected index,re,im");
    const auto idx = static_cast<std::size_t>(parse_double(rows[i][0], path));
    if (idx != i) throw IoError("'" + path.string() + "': indices must be 0..n-1 in order");
    v(i) = {parse_double(rows[i][1], path), parse_double(rows[i][2], path)};
  }
  return v;
}

void write_support_csv(const std::filesystem::path& path, const std::vector<int>& support) {
  auto out = open_out(path);
  out << "index\n";
  for (int s : support) out << s << "\n";
}

void write_design_log(const std::filesystem::path& path, const std::vector<double>& log) {
  auto out = open_out(path);
  out << "iteration,J\n";
  for (std::size_t i = 0; i < log.size(); ++i) out << i + 1 << "," << format_double(log[i]) << "\n";
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_recovery_csv(const std::filesystem::path& path, const RecoveryResult& result) {
  auto out = open_out(path);
  out << "index,re,im,in_support\n";
  for (Eigen::Index i = 0; i < result.r_hat.size(); ++i) {
    const bool in = std::binary_search(result.support.begin(), result.support.end(),
                                       static_cast<int>(i));
    out << i << "," << format_double(result.r_hat(i).real()) << ","
        << format_double(result.r_hat(i).imag()) << "," << (in ? 1 : 0) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_recovery_summary(const std::filesystem::path& path, const RecoveryResult& result) {
  auto out = open_out(path);
  out << "residual,iterations,converged\n"
      << format_double(result.residual_norm) << "," << result.iterations_used << ","
      << (result.converged ? "true" : "false") << "\n";
}

void write_amplitude_map(const std::filesystem::path& path, const AmplitudeMap& map) {
  if (static_cast<std::size_t>(map.rows) * map.cols != map.values.size()) {
    throw InvalidArgument("amplitude map size does not match its shape");
  }
  auto out = open_out(path);
  out << "# rows=" << map.rows << " cols=" << map.cols << "\n";
  out << "index,row,col,amplitude\n";
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    out << k << "," << k / map.cols << "," << k % map.cols << "," << format_double(map.values[k])
        << "\n";
  }
}

AmplitudeMap read_amplitude_map(const std::filesystem::path& path) {
  std::vector<std::string> comments;
  const auto rows = read_csv_rows(path, &comments);
  AmplitudeMap map;
  for (const auto& c : comments) {
    std::istringstream is(c.substr(1));
    std::string token;
    while (is >> token) {
      if (token.rfind("rows=", 0) == 0) map.rows = std::stoi(token.substr(5));
      if (token.rfind("cols=", 0) == 0) map.cols = std::stoi(token.substr(5));
    }
  }
  if (map.rows <= 0 || map.cols <= 0) {
    throw InvalidArgument("'" + path.string() + "' lacks a '# rows=R cols=C' shape line");
  }
  if (rows.size() != static_cast<std::size_t>(map.rows) * map.cols) {
    throw InvalidArgument("'" + path.string() + "' has " + std::to_string(rows.size()) +
                          " pixels but declares " + std::to_string(map.rows) + "x" +
                          std::to_string(map.cols));
  }
  map.values.resize(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 4) throw InvalidArgument("'" + path.string() + "': expected index,row,col,amplitude");
    const auto k = static_cast<std::size_t>(parse_double(r[0], path));
    const auto row = static_cast<std::size_t>(parse_double(r[1], path));
    const auto col = static_cast<std::size_t>(parse_double(r[2], path));
    if (k >= map.values.size() || row * map.cols + col != k) {
      throw InvalidArgument("'" + path.string() + "': pixel " + r[0] + " does not match the grid shape");
    }
    map.values[k] = parse_double(r[3], path);
  }
  return map;
}

std::vector<unsigned char> to_gray(const AmplitudeMap& map) {
  const double peak = map.values.empty() ? 0.0 : *std::max_element(map.values.begin(), map.values.end());
  std::vector<unsigned char> px(map.values.size(), 0);
  if (!(peak > 0.0)) return px;
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double v = std::clamp(map.values[k] / peak, 0.0, 1.0);
    px[k] = static_cast<unsigned char>(std::lround(255.0 * v));
  }
  return px;
}

void write_pgm(const std::filesystem::path& path, int rows, int cols,
               const std::vector<unsigned char>& pixels) {
  if (static_cast<std::size_t>(rows) * cols != pixels.size()) {
    throw InvalidArgument("pixel count does not match the image shape");
  }
  auto out = open_out(path, true);
  out << "P5\n" << cols << " " << rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<unsigned char> read_pgm(const std::filesystem::path& path, int& rows, int& cols) {
  auto in = open_in(path, true);
  std::string magic;
  int maxval = 0;
  in >> magic >> cols >> rows >> maxval;
  if (magic != "P5" || maxval != 255 || rows <= 0 || cols <= 0) {
    throw IoError("'" + path.string() + "' is not an 8-bit binary PGM");
  }
  in.get();
  std::vector<unsigned char> px(static_cast<std::size_t>(rows) * cols);
  if (!in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()))) {
    throw IoError("truncated PGM '" + path.string() + "'");
  }
  return px;
}

std::string ascii_preview(const AmplitudeMap& map) {
  static constexpr std::string_view ramp = " .:-=+*#%@";
  const auto gray = to_gray(map);
  std::string out;
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const auto g = gray[static_cast<std::size_t>(r) * map.cols + c];
      out += ramp[g * (ramp.size() - 1) / 255];
    }
    out += '\n';
  }
  return out;
}

}  // namespace risim::io
