#include "rank1check/spectral.hpp"

#include "rank1check/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace rank1check {

SkeletonGraph::SkeletonGraph(std::vector<std::size_t> parts, std::vector<Rational> transition)
    : parts_(std::move(parts)), transition_(std::move(transition)) {
  if (parts_.size() < 2) throw std::invalid_argument("the complete multipartite skeleton needs d >= 2 parts");
  for (auto n : parts_) {
    if (n == 0) throw std::invalid_argument("parts must be non-empty");
  }
  vertices_ = std::accumulate(parts_.begin(), parts_.end(), std::size_t{0});
  if (transition_.size() != vertices_ * vertices_) throw ShapeMismatch("transition matrix size differs from vertex count");
}

std::size_t SkeletonGraph::part_of(std::size_t vertex) const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (vertex < parts_[i]) return i;
    vertex -= parts_[i];
  }
  throw std::out_of_range("vertex outside graph");
}

bool SkeletonGraph::is_row_stochastic() const {
  for (std::size_t u = 0; u < vertices_; ++u) {
    Rational sum(0);
    for (std::size_t v = 0; v < vertices_; ++v) {
      if (transition(u, v) < 0) return false;
      sum += transition(u, v);
    }
    if (sum != 1) return false;
  }
  return true;
}

SkeletonGraph build_skeleton(const std::vector<std::size_t>& parts) {
  if (parts.size() < 2) throw std::invalid_argument("the complete multipartite skeleton needs d >= 2 parts");
  const std::size_t n = std::accumulate(parts.begin(), parts.end(), std::size_t{0});
  const std::size_t d = parts.size();
  std::vector<std::size_t> part(n);
  for (std::size_t i = 0, v = 0; i < d; ++i) {
    for (std::size_t j = 0; j < parts[i]; ++j) part[v++] = i;
  }
  std::vector<Rational> transition(n * n, Rational(0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (part[u] != part[v]) transition[u * n + v] = Rational(BigInt(1), BigInt((d - 1) * parts[part[v]]));
    }
  }
  return SkeletonGraph(parts, std::move(transition));
}

SpectrumReport verify_spectrum(const SkeletonGraph& g, double tolerance) {
  const std::size_t n = g.vertices();
  if (n > kSpectralVertexBudget) {
    throw BudgetExceeded("spectrum of " + std::to_string(n) + " vertices exceeds budget " +
                         std::to_string(kSpectralVertexBudget));
  }
  if (!g.is_row_stochastic()) throw std::invalid_argument("transition matrix is not row-stochastic");

  // Stationary weight of a vertex in part i is proportional to 1 / n_i; the
  // walk must be reversible with respect to it for the spectrum to be real.
  std::vector<Rational> pi(n);
  for (std::size_t v = 0; v < n; ++v) pi[v] = Rational(BigInt(1), BigInt(g.parts()[g.part_of(v)]));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (pi[u] * g.transition(u, v) != pi[v] * g.transition(v, u)) {
        throw std::invalid_argument("transition matrix is not reversible for the part-uniform measure");
      }
    }
  }

  Eigen::MatrixXd sym(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      const double scale = std::sqrt(to_double(pi[u]) / to_double(pi[v]));
      sym(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = scale * to_double(g.transition(u, v));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition failed");

  SpectrumReport report;
  report.parts = g.parts();
  const auto& values = solver.eigenvalues();
  report.eigenvalues.assign(values.data(), values.data() + values.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), std::greater<>());

  const double negative = -1.0 / static_cast<double>(g.parts().size() - 1);
  for (double lambda : report.eigenvalues) {
    const double r1 = std::abs(lambda - 1.0);
    const double r0 = std::abs(lambda);
    const double rn = std::abs(lambda - negative);
    report.max_residual = std::max(report.max_residual, std::min({r1, r0, rn}));
    if (r1 <= tolerance) ++report.count_one;
    else if (r0 <= tolerance) ++report.count_zero;
    else if (rn <= tolerance) ++report.count_negative;
    else ++report.count_other;
  }
  return report;
}

std::vector<Rational> quotient_spectrum(std::size_t d) {
  if (d < 2) throw std::invalid_argument("quotient spectrum needs d >= 2");
  std::vector<Rational> out{Rational(1)};
  out.insert(out.end(), d - 1, Rational(BigInt(-1), BigInt(d - 1)));
  return out;
}

std::string spectrum_csv_header() { return "d,parts,count_one,count_zero,count_negative,count_other,max_residual"; }

std::string to_csv_row(const SpectrumReport& report) {
  std::string parts;
  for (std::size_t i = 0; i < report.parts.size(); ++i) {
    if (i) parts += 'x';
    parts += std::to_string(report.parts[i]);
  }
  char residual[32];
  std::snprintf(residual, sizeof residual, "%.3e", report.max_residual);
  return std::to_string(report.parts.size()) + "," + parts + "," + std::to_string(report.count_one) + "," +
         std::to_string(report.count_zero) + "," + std::to_string(report.count_negative) + "," +
         std::to_string(report.count_other) + "," + residual;
}

}  // namespace rank1check
