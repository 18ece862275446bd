#include "bdsim/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bdsim {

std::vector<int> LieAlgebraSpec::coset_idx() const {
  std::vector<int> out = Khat_idx;
  out.insert(out.end(), Lbar_idx.begin(), Lbar_idx.end());
  return out;
}

MatA LieAlgebraSpec::ad(const VecA& X) const {
  MatA M = MatA::Zero(dim_G, dim_G);
  for (int A = 0; A < dim_G; ++A)
    for (int B = 0; B < dim_G; ++B) {
      double s = 0.0;
      for (int C = 0; C < dim_G; ++C) s += X[C] * fc(A, C, B);
      M(A, B) = s;
    }
  return M;
}

CMat LieAlgebraSpec::algebra_element(const VecA& c) const {
  const int n = static_cast<int>(generators[0].rows());
  CMat M = CMat::Zero(n, n);
  for (int A = 0; A < dim_G; ++A) M += c[A] * generators[A];
  return M;
}

Mat LieAlgebraSpec::normalized_killing_form(const LieAlgebraSpec& spec) {
  const int n = spec.dim_G;
  Mat K = Mat::Zero(n, n);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int C = 0; C < n; ++C)
        for (int D = 0; D < n; ++D) s += spec.fc(C, A, D) * spec.fc(D, B, C);
      K(A, B) = -s;
    }
  if (std::abs(K(0, 0)) > 1e-14) K /= K(0, 0);
  return K;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

void check_partition(const LieAlgebraSpec& spec) {
  std::vector<int> seen(spec.dim_G, 0);
  auto mark = [&](const std::vector<int>& idx, const char* label) {
    for (int i : idx) {
      if (i < 0 || i >= spec.dim_G)
        throw StructuralError(std::string("index partition: ") + label + " index " +
                              std::to_string(i) + " out of range");
      if (seen[i]++)
        throw StructuralError(std::string("index partition: index ") + std::to_string(i) +
                              " appears in more than one block (" + label + ")");
    }
  };
  mark(spec.H_idx, "H");
  mark(spec.Khat_idx, "Khat");
  mark(spec.Lbar_idx, "Lbar");
  for (int i = 0; i < spec.dim_G; ++i)
    if (!seen[i])
      throw StructuralError("index partition: index " + std::to_string(i) +
                            " missing from all blocks");
}

std::string triple(int C, int A, int B) {
  std::ostringstream os;
  os << "(C=" << C << ",A=" << A << ",B=" << B << ")";
  return os.str();
}

}  // namespace

ValidationReport validate_decomposition(const LieAlgebraSpec& spec) {
  const int n = spec.dim_G;
  if (n <= 0 || n > kMaxDim) throw StructuralError("algebra dimension out of supported range");
  if (spec.f.size() != static_cast<size_t>(n) * n * n)
    throw StructuralError("structure constant array has wrong size");
  if (static_cast<int>(spec.generators.size()) != n)
    throw StructuralError("generator count does not match algebra dimension");
  const int m = static_cast<int>(spec.generators[0].rows());
  for (const auto& Q : spec.generators)
    if (Q.rows() != m || Q.cols() != m) throw StructuralError("generators are not uniformly square");
  if (spec.inner_product.rows() != n || spec.inner_product.cols() != n)
    throw StructuralError("inner product has wrong size");
  check_partition(spec);

  ValidationReport rep;
  auto add = [&](std::string name, double residual, double tol, std::string detail) {
    rep.checks.push_back({std::move(name), residual <= tol, residual, std::move(detail)});
  };

  {
    double worst = 0.0;
    std::string where;
    for (int C = 0; C < n; ++C)
      for (int A = 0; A < n; ++A)
        for (int B = A; B < n; ++B) {
          double r = std::abs(spec.fc(C, A, B) + spec.fc(C, B, A));
          if (r > worst) { worst = r; where = triple(C, A, B); }
        }
    add("antisymmetry", worst, 1e-14, where);
  }

  {
    double worst = 0.0;
    std::string where;
    for (int A = 0; A < n; ++A)
      for (int B = A + 1; B < n; ++B)
        for (int C = B + 1; C < n; ++C)
          for (int E = 0; E < n; ++E) {
            double s = 0.0;
            for (int D = 0; D < n; ++D)
              s += spec.fc(D, A, B) * spec.fc(E, D, C) + spec.fc(D, B, C) * spec.fc(E, D, A) +
                   spec.fc(D, C, A) * spec.fc(E, D, B);
            if (std::abs(s) > worst) {
              worst = std::abs(s);
              where = "triple (A=" + std::to_string(A) + ",B=" + std::to_string(B) +
                      ",C=" + std::to_string(C) + ") target E=" + std::to_string(E);
            }
          }
    add("jacobi", worst, 1e-12, where);
  }

  {
    double worst = 0.0;
    std::string where;
    for (int A = 0; A < n; ++A)
      for (int B = A + 1; B < n; ++B) {
        CMat comm = spec.generators[A] * spec.generators[B] - spec.generators[B] * spec.generators[A];
        for (int C = 0; C < n; ++C) comm -= spec.fc(C, A, B) * spec.generators[C];
        double r = max_abs(CMat(comm));
        if (r > worst) { worst = r; where = "[Q_" + std::to_string(A) + ",Q_" + std::to_string(B) + "]"; }
      }
    add("generator_commutators", worst, 1e-10, where);
  }

  {
    // Closure of the split: each listed bracket lands in the stated block.
    std::vector<int> block(n, -1);
    for (int i : spec.H_idx) block[i] = 0;
    for (int i : spec.Khat_idx) block[i] = 1;
    for (int i : spec.Lbar_idx) block[i] = 2;
    struct Rule { int a, b; std::vector<int> target; const char* name; };
    const std::vector<Rule> rules = {
        {0, 0, {0}, "[H,H] in H"},
        {1, 1, {1}, "[K,K] in K"},
        {0, 1, {}, "[H,K] = 0"},
        {0, 2, {2}, "[H,L] in L"},
        {1, 2, {2}, "[K,L] in L"},
    };
    double worst = 0.0;
    std::string where;
    for (const auto& rule : rules)
      for (int A = 0; A < n; ++A)
        for (int B = 0; B < n; ++B) {
          bool match = (block[A] == rule.a && block[B] == rule.b) ||
                       (block[A] == rule.b && block[B] == rule.a);
          if (!match) continue;
          for (int C = 0; C < n; ++C) {
            bool allowed = std::find(rule.target.begin(), rule.target.end(), block[C]) !=
                           rule.target.end();
            if (allowed) continue;
            double r = std::abs(spec.fc(C, A, B));
            if (r > worst) { worst = r; where = std::string(rule.name) + " violated at " + triple(C, A, B); }
          }
        }
    add("closure", worst, 1e-12, where);
  }

  {
    double worst = 0.0;
    std::string where;
    for (int B = 0; B < n; ++B) {
      double s = 0.0;
      for (int A = 0; A < n; ++A) s += spec.fc(A, A, B);
      if (std::abs(s) > worst) { worst = std::abs(s); where = "B=" + std::to_string(B); }
    }
    add("unimodularity", worst, 1e-12, where);
  }

  {
    // The split is orthogonal for the declared inner product.
    std::vector<int> block(n, -1);
    for (int i : spec.H_idx) block[i] = 0;
    for (int i : spec.Khat_idx) block[i] = 1;
    for (int i : spec.Lbar_idx) block[i] = 2;
    double worst = 0.0;
    std::string where;
    for (int A = 0; A < n; ++A)
      for (int B = 0; B < n; ++B)
        if (block[A] != block[B]) {
          double r = std::abs(spec.inner_product(A, B));
          if (r > worst) { worst = r; where = "(A=" + std::to_string(A) + ",B=" + std::to_string(B) + ")"; }
        }
    add("inner_product_block_diagonal", worst, 1e-12, where);
  }

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                           [](const CheckResult& c) { return c.passed; });
  return rep;
}

CMat group_exp(const LieAlgebraSpec& spec, const VecA& coefficients) {
  if (!coefficients.allFinite()) throw DomainError("group_exp: non-finite coefficients");
  if (coefficients.size() != spec.dim_G)
    throw StructuralError("group_exp: coefficient vector has wrong length");
  return matrix_exp(CMat(spec.algebra_element(coefficients)));
}

MatA adjoint_matrix(const LieAlgebraSpec& spec, const CMat& g) {
  const int n = spec.dim_G;
  const int m = static_cast<int>(g.rows());
  CMat gtg = g.adjoint() * g;
  if (max_abs(CMat(gtg - CMat::Identity(m, m))) > 1e-8)
    throw DomainError("adjoint_matrix: element is not unitary in the represented group");
  // Gram matrix of the generators under Re tr(Q^† Q); real because the
  // conjugated generators stay in the real span for a real form.
  Mat G(n, n);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      G(A, B) = (spec.generators[A].adjoint() * spec.generators[B]).trace().real();
  Eigen::LDLT<Mat> solver(G);
  if (solver.info() != Eigen::Success)
    throw StructuralError("adjoint_matrix: generator Gram matrix is singular");
  MatA D = MatA::Zero(n, n);
  CMat ginv = g.adjoint();
  for (int B = 0; B < n; ++B) {
    CMat M = g * spec.generators[B] * ginv;
    Vec rhs(n);
    for (int A = 0; A < n; ++A) rhs[A] = (spec.generators[A].adjoint() * M).trace().real();
    D.col(B) = solver.solve(rhs);
  }
  return D;
}

}  // namespace bdsim
