#pragma once

// Random walk on the 1-skeleton of the complete d-partite complex with parts
// of sizes n_1, ..., n_d: from a vertex of part i the walk moves to a vertex of
// part j != i with probability 1 / ((d - 1) n_j).

#include "rank1check/rational.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rank1check {

inline constexpr double kSpectralTolerance = 1e-9;
inline constexpr std::size_t kSpectralVertexBudget = 512;

class SkeletonGraph {
 public:
  /// Takes an explicit transition matrix (row-major, n x n with n = sum of
  /// parts); verify_spectrum rejects it unless it is row-stochastic.
  SkeletonGraph(std::vector<std::size_t> parts, std::vector<Rational> transition);

  const std::vector<std::size_t>& parts() const noexcept { return parts_; }
  std::size_t vertices() const noexcept { return vertices_; }
  std::size_t part_of(std::size_t vertex) const;
  const Rational& transition(std::size_t from, std::size_t to) const { return transition_.at(from * vertices_ + to); }

  bool is_row_stochastic() const;

 private:
  std::vector<std::size_t> parts_;
  std::size_t vertices_ = 0;
  std::vector<Rational> transition_;
};

SkeletonGraph build_skeleton(const std::vector<std::size_t>& parts);

struct SpectrumReport {
  std::vector<std::size_t> parts;
  std::vector<double> eigenvalues;  ///< descending
  std::size_t count_one = 0;
  std::size_t count_zero = 0;
  std::size_t count_negative = 0;  ///< eigenvalue -1/(d-1)
  std::size_t count_other = 0;
  double max_residual = 0;         ///< largest distance from an eigenvalue to {1, 0, -1/(d-1)}
};

/// Diagonalizes D^{1/2} A D^{-1/2} for the stationary measure D and sorts the
/// eigenvalues into the three families within `tolerance`.
SpectrumReport verify_spectrum(const SkeletonGraph& g, double tolerance = kSpectralTolerance);

/// Nonzero spectrum of (J - I) / (d - 1): 1 once, then -1/(d-1) d - 1 times.
std::vector<Rational> quotient_spectrum(std::size_t d);

/// "d,parts,count_one,count_zero,count_negative,count_other,max_residual"
std::string spectrum_csv_header();
/// parts are written as "2x2x2"; max_residual in %.3e.
std::string to_csv_row(const SpectrumReport& report);

}  // namespace rank1check
