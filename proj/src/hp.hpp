#pragma once

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace reso::hp {

using real = boost::multiprecision::cpp_bin_float_100;
using Mat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;

std::vector<std::complex<double>> eigenvalues(const Mat& m);

// Monic characteristic polynomial, leading 1 first (Faddeev-LeVerrier).
std::vector<real> charpoly(const Mat& m);

Mat from_double(const Eigen::MatrixXd& m);

}  // namespace reso::hp
