#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stopbound/boundary.hpp"

namespace stopbound {

/// Shortest decimal text with 12 significant digits; the interchange format
/// for every CSV cell, so reruns are byte-comparable.
std::string format_sig(double vfield);

/// Writes the boundary as CSV with header `x,b`, one row per grid node.
void write_boundary_csv(const std::filesystem::path& path, const Boundary& b);

/// Parses a boundary CSV (schema errors carry the 1-based line number).
Boundary read_boundary_csv(const std::filesystem::path& path);

/// Reads a points CSV with header `x,y`.
std::vector<std::pair<double, double>> read_points_csv(const std::filesystem::path& path);

/// Pointwise comparison of two boundary curves on [x_lo, x_hi] intersected
/// with both domains, sampled at both node sets plus a uniform refinement.
struct CompareReport {
  double sup_abs = 0.0;
  double mean_abs = 0.0;
  double sup_rel = 0.0;       ///< |a-b| / max(|a|, |b|) at the worst point
  double min_signed = 0.0;    ///< min of a - b
  double max_signed = 0.0;    ///< max of a - b
  int points = 0;
  bool pass = false;  ///< |a-b| <= max(abs_tol, rel_tol * max(|a|,|b|)) everywhere
};

CompareReport compare_boundaries(const Boundary& a, const Boundary& b, double rel_tol,
                                 double abs_tol, double x_lo, double x_hi);

/// FNV-1a 64-bit hash of a file's bytes, as a fixed-width hex string.
std::string file_hash_hex(const std::filesystem::path& path);

}  // namespace stopbound
