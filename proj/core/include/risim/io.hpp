#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "risim/sparse_recovery.hpp"
#include "risim/types.hpp"

namespace risim::io {

// Binary matrix block, all fields little-endian:
//   bytes 0..7   magic "RISMAT01"
//   bytes 8..15  uint64 rows
//   bytes 16..23 uint64 cols
//   payload      rows*cols pairs of float64 (re, im), row-major
void write_matrix_binary(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix_binary(const std::filesystem::path& path);

// One CSV line per matrix row; column j becomes the pair re<j>,im<j>.
void write_matrix_csv(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix_csv(const std::filesystem::path& path);

// index,re,im
void write_vector_csv(const std::filesystem::path& path, const CVector& v);
CVector read_vector_csv(const std::filesystem::path& path);

// index
void write_support_csv(const std::filesystem::path& path, const std::vector<int>& support);

// iteration,J with iterations counted from 1
void write_design_log(const std::filesystem::path& path, const std::vector<double>& log);

// index,re,im,in_support
void write_recovery_csv(const std::filesystem::path& path, const RecoveryResult& result);
// residual,iterations,converged
void write_recovery_summary(const std::filesystem::path& path, const RecoveryResult& result);

/// K-pixel amplitude map on a rows x cols grid (pixel k at row k / cols).
struct AmplitudeMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

// "# rows=<R> cols=<C>" then index,row,col,amplitude
void write_amplitude_map(const std::filesystem::path& path, const AmplitudeMap& map);
AmplitudeMap read_amplitude_map(const std::filesystem::path& path);

/// 8-bit grayscale scaled linearly from 0 to the largest value; an all-zero
/// map renders black.
std::vector<unsigned char> to_gray(const AmplitudeMap& map);
/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, int rows, int cols,
               const std::vector<unsigned char>& pixels);
std::vector<unsigned char> read_pgm(const std::filesystem::path& path, int& rows, int& cols);
/// Coarse text rendering, one character per pixel.
std::string ascii_preview(const AmplitudeMap& map);

/// Full-precision decimal text for a double (round-trips exactly).
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace risim::io
