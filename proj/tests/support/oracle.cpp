#include "oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace treewalk::oracle {

OracleResult exact_kernel(const std::vector<OracleAtom>& atoms, const std::vector<OracleTarget>& targets,
                          int low, int high) {
  if (high < 1 || high > 20 || low > 0) throw std::invalid_argument("oracle window");
  const std::int64_t width = std::int64_t{1} << high;  // w = j / 2^high
  const int heights = high - low + 1;
  const std::int64_t n = width * heights;
  auto index = [&](int h, std::int64_t j) { return static_cast<std::int64_t>(h - low) * width + j; };

  // x = (I - Q^T)^-1 e_o gives x_y = G(o, y).
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * (atoms.size() + 1));
  double p_up = 0;
  for (const auto& a : atoms) {
    if (std::abs(a.k) != 1) throw std::invalid_argument("oracle steps change height by one");
    if (a.k > 0) p_up += a.weight;
  }
  for (int h = low; h <= high; ++h) {
    for (std::int64_t j = 0; j < width; ++j) {
      const auto from = index(h, j);
      entries.emplace_back(from, from, 1.0);
      for (const auto& a : atoms) {
        const int h2 = h + a.k;
        if (h2 < low || h2 > high) continue;
        std::int64_t j2 = j;
        if (h2 > 0) {
          const std::int64_t shift = a.t * (std::int64_t{1} << (high - h2));
          j2 = ((j + shift) % width + width) % width;
        }
        entries.emplace_back(index(h2, j2), from, -a.weight);
      }
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw std::runtime_error("oracle factorization failed");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(index(0, 0)) = 1.0;
  const Eigen::VectorXd x = lu.solve(e);

  OracleResult out;
  out.states = n;
  for (const auto& y : targets) {
    if (y.height < low || y.height > high || y.den_log2 > high) throw std::invalid_argument("target outside window");
    // w = 2^-h c mod 1 with c = num / 2^den.
    const int shift = high - y.height - y.den_log2;
    std::int64_t j = 0;
    if (shift >= 0) {
      j = ((y.num << shift) % width + width) % width;
    } else if (y.num % (std::int64_t{1} << -shift) == 0) {
      j = ((y.num >> -shift) % width + width) % width;
    } else {
      throw std::invalid_argument("target center finer than the window");
    }
    out.green.push_back(x(index(y.height, j)));
  }
  // A killed path first crosses above `high` or below `low`.  From there the
  // chance of ever returning to a target is at most rho, built from r, the
  // one-level crossing probability of the +-1 height walk, and each return is
  // worth at most the true largest Green value, itself at most gmax + error.
  const double r_up = std::min(1.0, p_up / std::max(1e-300, 1 - p_up));
  const double r_down = std::min(1.0, (1 - p_up) / std::max(1e-300, p_up));
  int top = 0, bottom = 0;
  for (const auto& y : targets) {
    top = std::max(top, y.height);
    bottom = std::min(bottom, y.height);
  }
  const double rho = std::pow(r_up, high + 1) * std::pow(r_down, high + 1 - top) + std::pow(r_up, bottom - low + 1);
  const double gmax = x.maxCoeff();
  out.truncation = rho < 1 ? gmax * rho / (1 - rho) : std::numeric_limits<double>::infinity();
  return out;
}

Vertex target_vertex(const OracleTarget& y, PrecisionBudget budget) {
  const PAdic c = from_rational(y.num, std::int64_t{1} << y.den_log2, 2, budget);
  return padic_vertex(c, y.height);
}

}  // namespace treewalk::oracle
