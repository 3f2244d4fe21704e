#include "ahb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace ahb::io {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& img, double lo,
               double hi) {
    if (!(hi > lo)) throw std::invalid_argument("write_pgm: need hi > lo");
    std::ofstream out = open_out(path);
    out << "P2\n" << img.cols() << " " << img.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < img.rows(); ++i) {
        for (Eigen::Index j = 0; j < img.cols(); ++j) {
            const double t = std::min(1.0, std::max(0.0, (img(i, j) - lo) / (hi - lo)));
            out << static_cast<int>(std::lround(255.0 * t));
            out << (j + 1 == img.cols() ? '\n' : ' ');
        }
    }
}

void write_image_csv(const std::filesystem::path& path, const Eigen::MatrixXd& img) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < img.rows(); ++i) {
        for (Eigen::Index j = 0; j < img.cols(); ++j) {
            out << format_double(img(i, j));
            out << (j + 1 == img.cols() ? '\n' : ',');
        }
    }
}

void write_coo(const std::filesystem::path& path,
               const Eigen::SparseMatrix<double, Eigen::RowMajor>& m) {
    std::ofstream out = open_out(path);
    out << "row,col,value\n";
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, k); it; ++it)
            out << it.row() << ',' << it.col() << ',' << format_double(it.value()) << '\n';
}

}  // namespace ahb::io
