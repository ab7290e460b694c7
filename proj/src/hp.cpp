#include "hp.hpp"

namespace reso::hp {

std::vector<std::complex<double>> eigenvalues(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  const auto ev = es.eigenvalues();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    out[static_cast<std::size_t>(i)] = {static_cast<double>(ev(i).real()),
                                        static_cast<double>(ev(i).imag())};
  return out;
}

std::vector<real> charpoly(const Mat& a) {
  const Eigen::Index n = a.rows();
  std::vector<real> c(static_cast<std::size_t>(n + 1));
  c[0] = 1;
  Mat M = Mat::Zero(n, n);
  const Mat I = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = a * M + c[static_cast<std::size_t>(k - 1)] * I;
    const Mat AM = a * M;
    c[static_cast<std::size_t>(k)] = -AM.trace() / real(k);
  }
  return c;
}

Mat from_double(const Eigen::MatrixXd& m) {
  Mat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace reso::hp
