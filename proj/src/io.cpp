#include "bden/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <variant>

namespace bden {

EdgeList read_edge_list(std::istream& in) {
  EdgeList out;
  std::unordered_map<std::string, NodeId> ids;
  auto node = [&](const std::string& token) {
    auto it = ids.find(token);
    if (it != ids.end()) return it->second;
    const NodeId id = out.graph.add_node();
    ids.emplace(token, id);
    out.names.push_back(token);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;  // blank
    if (a[0] == '#' || a[0] == '%') continue;
    if (!(fields >> b))
      throw IoError("edge list line " + std::to_string(line_no) + ": expected two node tokens");
    if (a == b) {
      node(a);
      ++out.self_loops;
      continue;
    }
    const NodeId u = node(a);
    const NodeId v = node(b);
    if (!out.graph.add_edge(u, v)) ++out.duplicates;
  }
  if (in.bad()) throw IoError("edge list: read error");
  return out;
}

EdgeList load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

namespace {

std::string count_str(std::size_t n) { return std::to_string(n); }

}  // namespace

void write_fixation_csv(std::ostream& out, std::span<const SweepCell> rows) {
  out << kFixationHeader << '\n';
  for (const auto& [p, e] : rows) {
    std::string alpha, b, c, delta, dynamics = "none";
    if (const auto* d = std::get_if<DriftDynamics>(&p.dynamics)) {
      dynamics = "drift";
      alpha = format_number(d->alpha);
    } else if (const auto* s = std::get_if<SelectionDynamics>(&p.dynamics)) {
      dynamics = "selection";
      delta = format_number(s->delta);
      if (s->payoff.benefit_cost) {
        b = format_number(s->payoff.benefit_cost->first);
        c = format_number(s->payoff.benefit_cost->second);
      }
    }
    out << format_number(p.lambda) << ',' << format_number(p.mu) << ',' << p.m << ','
        << (p.mechanism == Mechanism::uniform ? "uniform" : "preferential") << ',' << dynamics
        << ',' << alpha << ',' << b << ',' << c << ',' << delta << ',' << count_str(e.replicates)
        << ',' << e.pure_first << ',' << e.pure_second << ',' << e.extinct << ',' << e.timeout
        << ',' << format_number(e.p_hat) << ',' << format_number(e.se) << '\n';
  }
}

void write_series_csv(std::ostream& out, std::span<const SeriesPoint> rows) {
  out << kSeriesHeader << '\n';
  for (const auto& r : rows)
    out << format_number(r.t) << ',' << r.n << ',' << r.count_first << ','
        << format_number(r.mean_degree) << '\n';
}

void write_stationary_csv(std::ostream& out, const StationaryStats& stats) {
  out << kStationaryHeader << '\n';
  for (const auto& [value, n] : stats.size_histogram) out << "size," << value << ',' << n << '\n';
  for (const auto& [value, n] : stats.degree_histogram)
    out << "degree," << value << ',' << n << '\n';
}

}  // namespace bden
