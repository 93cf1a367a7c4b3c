#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace tensorrank::oracle {

std::vector<std::vector<double>> weighted_ls_trajectory(const std::vector<double>& series,
                                                        std::size_t lag, std::size_t order,
                                                        double rho, double delta) {
  const auto m = static_cast<Eigen::Index>(order);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ds;
  std::vector<std::vector<double>> out;
  for (std::size_t t = lag + order - 1; t < series.size(); ++t) {
    Eigen::VectorXd x(m);
    for (std::size_t p = 0; p < order; ++p) x(static_cast<Eigen::Index>(p)) = series[t - lag - p];
    xs.push_back(x);
    ds.push_back(series[t]);

    const std::size_t k = xs.size();
    Eigen::MatrixXd r = std::pow(rho, static_cast<double>(k)) * delta *
                        Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < k; ++i) {
      const double g = std::pow(rho, static_cast<double>(k - 1 - i));
      r += g * xs[i] * xs[i].transpose();
      p += g * ds[i] * xs[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
    if (!lu.isInvertible()) throw std::runtime_error("weighted least-squares system is singular");
    Eigen::VectorXd w = lu.solve(p);
    out.emplace_back(w.data(), w.data() + w.size());
  }
  return out;
}

std::vector<double> preference_matrix(const Cube& s, const std::vector<bool>& maximize,
                                      const std::vector<double>& weights) {
  std::vector<double> pi(s.n * s.n, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t k = 0; k < s.n; ++k) {
      if (i == k) continue;
      double sum = 0.0;
      for (std::size_t j = 0; j < s.m; ++j) {
        for (std::size_t l = 0; l < s.w; ++l) {
          const std::size_t c = j * s.w + l;
          double d = s.at(i, j, l) - s.at(k, j, l);
          if (!maximize[c]) d = -d;
          const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
          sum += weights[c] * (sgn + 1.0) / 2.0;
        }
      }
      pi[i * s.n + k] = sum;
    }
  }
  return pi;
}

std::vector<double> net_flow(const Cube& s, const std::vector<bool>& maximize,
                             const std::vector<double>& weights) {
  const auto pi = preference_matrix(s, maximize, weights);
  std::vector<double> flow(s.n, 0.0);
  for (std::size_t i = 0; i < s.n; ++i) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t a = 0; a < s.n; ++a) {
      if (a == i) continue;
      plus += pi[i * s.n + a];
      minus += pi[a * s.n + i];
    }
    flow[i] = plus / static_cast<double>(s.n - 1) - minus / static_cast<double>(s.n - 1);
  }
  return flow;
}

}  // namespace tensorrank::oracle
