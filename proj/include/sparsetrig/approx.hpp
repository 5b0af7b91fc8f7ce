#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "sparsetrig/trigpoly.hpp"

// Best m-term thresholding and the A_theta tail bounds that control it.

namespace sparsetrig {

struct ThresholdResult {
  SparseSpectrum head;   // the m largest terms (ties broken lexicographically)
  SparseSpectrum tail;   // everything else
  std::size_t m_requested = 0;
  std::size_t m_effective = 0;  // min(m, support size)
};

inline ThresholdResult threshold(const SparseSpectrum& t, std::size_t m) {
  const RankedCoefficients r = rank(t);
  ThresholdResult out{SparseSpectrum(t.dim()), SparseSpectrum(t.dim()), m,
                      std::min(m, r.size())};
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (j < m)
      out.head.set(r.order[j].first, r.order[j].second);
    else
      out.tail.set(r.order[j].first, r.order[j].second);
  }
  return out;
}

// sup over the class: tail_gamma <= (m+1)^{-(1/theta - 1/gamma)} * ||f||_{A_theta}
inline double stechkin_bound(std::size_t m, double theta, double gamma,
                             double a_theta) {
  if (!(theta > 0) || std::isnan(theta))
    throw std::invalid_argument("stechkin_bound: theta must be > 0");
  if (std::isnan(gamma) || !(gamma > theta))
    throw std::invalid_argument("stechkin_bound: need theta < gamma");
  if (a_theta < 0 || std::isnan(a_theta))
    throw std::invalid_argument("stechkin_bound: negative norm");
  const double inv_gamma = (gamma == kInf) ? 0.0 : 1.0 / gamma;
  const double expo = 1.0 / theta - inv_gamma;
  return std::pow(static_cast<double>(m) + 1.0, -expo) * a_theta;
}

// ell_gamma norm of the coefficient sequence past the m largest
inline double tail_gamma_norm(const SparseSpectrum& t, std::size_t m,
                              double gamma) {
  if (std::isnan(gamma) || !(gamma > 0))
    throw std::invalid_argument("tail_gamma_norm: gamma must be > 0");
  const ThresholdResult th = threshold(t, m);
  return a_theta_norm(th.tail, gamma);
}

}  // namespace sparsetrig
