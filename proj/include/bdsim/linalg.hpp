#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace bdsim {

// Model-size cap for stack-allocated temporaries in the integration loop.
// Algebra dimension and representation dimension must both stay <= kMaxDim.
constexpr int kMaxDim = 12;

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

using MatA = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using VecA = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMatA = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVecA = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ChartDomainError : DomainError {
  using DomainError::DomainError;
};
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scaling-and-squaring matrix exponential with a truncated series.
// Series is cut when the term falls below 1e-16 relative; accuracy ~1e-13.
template <typename MatT>
MatT matrix_exp(const MatT& A) {
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (nrm > 0.5) {
    s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  }
  MatT B = A / std::pow(2.0, s);
  MatT term = MatT::Identity(A.rows(), A.cols());
  MatT acc = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * B) / static_cast<double>(k);
    acc += term;
    if (term.cwiseAbs().maxCoeff() < 1e-16 * std::max(1.0, acc.cwiseAbs().maxCoeff())) break;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

// Lower-triangular factor X with X X^T = spd. Throws naming the smallest
// eigenvalue when the input is not positive-definite.
inline MatA noise_factor(const MatA& spd) {
  if (!spd.isApprox(spd.transpose(), 1e-10)) {
    throw DomainError("noise_factor: input not symmetric");
  }
  Eigen::LLT<MatA> llt(spd);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatA> es(spd);
    throw FactorizationError("noise_factor: not positive-definite, smallest eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()));
  }
  return llt.matrixL();
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace bdsim
