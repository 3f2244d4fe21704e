#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ahb::io {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Portable graymap (ASCII P2), values clipped to [lo, hi] and scaled to
/// 0..255.
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& img, double lo,
               double hi);

/// Flat CSV of an image (one row per image row).
void write_image_csv(const std::filesystem::path& path, const Eigen::MatrixXd& img);

/// Coordinate text format: "row,col,value" per nonzero, with a header line.
void write_coo(const std::filesystem::path& path,
               const Eigen::SparseMatrix<double, Eigen::RowMajor>& m);

}  // namespace ahb::io
