#include "qrec/channels.hpp"

#include <cmath>

namespace qrec {

Channel Channel::gad(double gamma, double p_eq, int target) {
  Channel ch;
  ch.kind = Kind::GeneralizedAmplitudeDamping;
  ch.gamma = gamma;
  ch.p_eq = p_eq;
  ch.target = target;
  ch.validate();
  return ch;
}

Channel Channel::depolarizing(double p, int target) {
  Channel ch;
  ch.kind = Kind::Depolarizing;
  ch.p = p;
  ch.target = target;
  ch.validate();
  return ch;
}

void Channel::validate() const {
  if (kind == Kind::GeneralizedAmplitudeDamping) {
    if (gamma < 0.0 || gamma > 1.0) throw DomainError("GAD gamma outside [0,1]");
    if (p_eq < 0.0 || p_eq > 0.5) throw DomainError("GAD p_eq outside [0,1/2]");
  } else {
    if (p < 0.0 || p > 1.0) throw DomainError("depolarizing p outside [0,1]");
  }
}

std::vector<Mat> kraus_ops(const Channel& ch) {
  ch.validate();
  std::vector<Mat> ks;
  if (ch.kind == Channel::Kind::GeneralizedAmplitudeDamping) {
    const double sg = std::sqrt(ch.gamma);
    const double sr = std::sqrt(1.0 - ch.gamma);
    const double a = std::sqrt(1.0 - ch.p_eq);
    const double b = std::sqrt(ch.p_eq);
    Mat k1(2, 2), k2(2, 2), k3(2, 2), k4(2, 2);
    k1 << a, 0, 0, a * sr;
    k2 << 0, a * sg, 0, 0;
    k3 << b * sr, 0, 0, b;
    k4 << 0, 0, b * sg, 0;
    ks = {k1, k2, k3, k4};
  } else {
    const double c0 = std::sqrt(1.0 - 0.75 * ch.p);
    const double c1 = std::sqrt(0.25 * ch.p);
    ks = {c0 * pauli('I'), c1 * pauli('X'), c1 * pauli('Y'), c1 * pauli('Z')};
  }
  return ks;
}

Mat apply_channel(const Mat& rho, const Channel& ch, const std::vector<int>& dims) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat& k : kraus_ops(ch)) {
    const Mat ke = embed_on(k, {ch.target}, dims);
    out += ke * rho * ke.adjoint();
  }
  return out;
}

} // namespace qrec
