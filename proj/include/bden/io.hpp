#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bden/experiments.hpp"
#include "bden/graph.hpp"

namespace bden {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeList {
  DynamicGraph graph;
  /// Original token of each node, indexed by NodeId value.
  std::vector<std::string> names;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// One edge per line as two whitespace-separated tokens; further columns
/// (weights, timestamps) are ignored. Blank lines and lines starting with
/// '#' or '%' are skipped. Self-loops and repeated edges are dropped and
/// counted.
EdgeList read_edge_list(std::istream& in);
EdgeList load_edge_list(const std::string& path);

/// Fixed-point free formatting with 10 significant digits and '.' as the
/// decimal separator.
std::string format_number(double value);

inline constexpr const char* kFixationHeader =
    "lambda,mu,m,mechanism,dynamics,alpha,b,c,delta,replicates,pure_first,pure_second,extinct,"
    "timeout,p_hat,se";
inline constexpr const char* kSeriesHeader = "t,N,count_first,mean_degree";
inline constexpr const char* kStationaryHeader = "histogram,value,count";

void write_fixation_csv(std::ostream& out, std::span<const SweepCell> rows);
void write_series_csv(std::ostream& out, std::span<const SeriesPoint> rows);
void write_stationary_csv(std::ostream& out, const StationaryStats& stats);

}  // namespace bden
