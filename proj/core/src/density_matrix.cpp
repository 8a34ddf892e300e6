#include "qrec/density_matrix.hpp"

#include <cmath>
#include <numeric>

namespace qrec {

namespace {

// strides for big-endian mixed-radix digit decomposition over dims
std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> st(dims.size());
  long acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    st[k] = acc;
    acc *= dims[k];
  }
  return st;
}

long total_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) {
    if (x < 1) throw ShapeError("subsystem dimension must be >= 1");
    d *= x;
  }
  return d;
}

void check_targets(const std::vector<int>& targets, const std::vector<int>& dims) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= static_cast<int>(dims.size()))
      throw ShapeError("target subsystem index out of range");
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j]) throw ShapeError("duplicate target subsystem");
  }
}

} // namespace

bool is_density_matrix(const Mat& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

void require_density_matrix(const Mat& rho, double tol) {
  if (!is_density_matrix(rho, tol)) throw StateError("density-matrix invariants violated");
}

bool is_unitary(const Mat& u, double tol) {
  if (u.rows() != u.cols() || u.rows() < 1) return false;
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat projector(const Vec& psi) { return psi * psi.adjoint(); }

Mat qubit_diag(double p_excited) {
  if (p_excited < -1e-12 || p_excited > 1.0 + 1e-12)
    throw DomainError("excited population outside [0,1]");
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 1.0 - p_excited;
  rho(1, 1) = p_excited;
  return rho;
}

Mat pauli(char axis) {
  Mat m(2, 2);
  switch (axis) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw DomainError("pauli axis must be one of I,X,Y,Z");
  }
  return m;
}

Mat random_haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw ShapeError("dimension must be positive");
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the R-diagonal phases so the distribution is exactly Haar
  for (int j = 0; j < dim; ++j) {
    Cplx d = r(j, j);
    Cplx ph = (std::abs(d) > 0) ? d / std::abs(d) : Cplx(1, 0);
    q.col(j) *= ph;
  }
  return q;
}

Mat random_density(int dim, Rng& rng) {
  Mat u = random_haar_unitary(dim, rng);
  std::vector<double> w(dim);
  double tot = 0;
  for (int i = 0; i < dim; ++i) {
    w[i] = -std::log(1.0 - rng.uniform()); // Exp(1) -> flat Dirichlet weights
    tot += w[i];
  }
  Mat rho = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) rho += (w[i] / tot) * projector(u.col(i));
  return rho;
}

double von_neumann_entropy(const Mat& rho) {
  if (rho.rows() != rho.cols()) throw ShapeError("entropy of a non-square matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < -1e-6) throw StateError("eigenvalue below -1e-6 in entropy");
    if (lam <= 0.0) continue; // [-1e-9, 0) clamps to zero contribution
    s -= lam * std::log(lam);
  }
  return s < 0.0 ? 0.0 : s;
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

Mat partial_trace(const Mat& rho, const std::vector<int>& keep,
                  const std::vector<int>& dims) {
  const long d = total_dim(dims);
  if (rho.rows() != d || rho.cols() != d)
    throw ShapeError("state dimension does not match dims product");
  check_targets(keep, dims);

  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  const auto st = strides_of(dims);
  long dk = 1;
  for (int k : keep) dk *= dims[k];
  long dt = 1;
  for (int k : traced) dt *= dims[k];

  // offset of a kept-subsystem composite index into the full index
  auto offset_of = [&](const std::vector<int>& subs, long idx) {
    long off = 0;
    for (int k = static_cast<int>(subs.size()) - 1; k >= 0; --k) {
      off += (idx % dims[subs[k]]) * st[subs[k]];
      idx /= dims[subs[k]];
    }
    return off;
  };

  Mat out = Mat::Zero(dk, dk);
  for (long a = 0; a < dk; ++a) {
    const long ra = offset_of(keep, a);
    for (long b = 0; b < dk; ++b) {
      const long rb = offset_of(keep, b);
      Cplx acc = 0;
      for (long tt = 0; tt < dt; ++tt) {
        const long rt = offset_of(traced, tt);
        acc += rho(ra + rt, rb + rt);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

Mat embed_on(const Mat& op, const std::vector<int>& targets,
             const std::vector<int>& dims) {
  const long d = total_dim(dims);
  check_targets(targets, dims);
  long dt = 1;
  for (int k : targets) dt *= dims[k];
  if (op.rows() != dt || op.cols() != dt)
    throw ShapeError("operator dimension does not match target dims product");

  const auto st = strides_of(dims);
  auto target_index = [&](long full) {
    long idx = 0;
    for (int k : targets) idx = idx * dims[k] + (full / st[k]) % dims[k];
    return idx;
  };
  auto replace_targets = [&](long full, long tidx) {
    long out = full;
    for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
      const int sub = targets[k];
      const long cur = (out / st[sub]) % dims[sub];
      const long nue = tidx % dims[sub];
      out += (nue - cur) * st[sub];
      tidx /= dims[sub];
    }
    return out;
  };

  Mat full = Mat::Zero(d, d);
  for (long col = 0; col < d; ++col) {
    const long tcol = target_index(col);
    for (long trow = 0; trow < dt; ++trow) {
      const Cplx v = op(trow, tcol);
      if (v == Cplx(0, 0)) continue;
      full(replace_targets(col, trow), col) += v;
    }
  }
  return full;
}

Mat apply_unitary(const Mat& rho, const Mat& u, const std::vector<int>& targets,
                  const std::vector<int>& dims) {
  if (!is_unitary(u)) throw OperatorError("operator is not unitary");
  const Mat full = embed_on(u, targets, dims);
  return full * rho * full.adjoint();
}

std::pair<double, Mat> measure_branch(const Mat& rho, int qubit, int outcome,
                                      const std::vector<int>& dims) {
  if (qubit < 0 || qubit >= static_cast<int>(dims.size()))
    throw ShapeError("measured qubit index out of range");
  if (dims[qubit] != 2) throw ShapeError("measured subsystem is not a qubit");
  if (outcome != 0 && outcome != 1) throw DomainError("outcome must be 0 or 1");

  Mat p2 = Mat::Zero(2, 2);
  p2(outcome, outcome) = 1.0;
  const Mat proj = embed_on(p2, {qubit}, dims);
  const Mat cut = proj * rho * proj;
  const double prob = cut.trace().real();
  if (prob < 1e-12) throw DegenerateBranchError("measurement branch probability < 1e-12");
  return {prob, cut / prob};
}

double fidelity_with_pure(const Mat& rho, const Vec& psi) {
  if (rho.rows() != psi.size()) throw ShapeError("state and vector dimensions differ");
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-9) throw DomainError("reference vector is not normalized");
  const Cplx v = (psi.adjoint() * rho * psi)(0, 0);
  if (std::abs(v.imag()) > 1e-9) throw StateError("fidelity has a non-real value");
  return v.real();
}

} // namespace qrec
