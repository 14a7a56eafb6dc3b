// Serial loop vs OpenMP replicate batch on the same seeds.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <omp.h>

#include "bden/experiments.hpp"

int main(int argc, char** argv) {
  using clock = std::chrono::steady_clock;
  const std::size_t reps = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200;
  const int jobs = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();

  bden::SimParams p;
  p.lambda = 2.0;
  p.mu = 0.01;
  p.m = 4;
  p.dynamics = bden::DriftDynamics{0.1};
  const std::uint64_t seed = 12345;

  auto t0 = clock::now();
  const auto serial = bden::run_replicates_serial(p, reps, seed, bden::kDefaultEventLimit);
  auto t1 = clock::now();
  const auto parallel = bden::run_replicates(p, reps, seed, bden::kDefaultEventLimit, jobs);
  auto t2 = clock::now();

  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    same = serial[i].outcome == parallel[i].outcome && serial[i].t_abs == parallel[i].t_abs &&
           serial[i].events == parallel[i].events;

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  std::cout << "replicates " << reps << ", jobs " << jobs << "\n"
            << "serial   " << ts << " s\n"
            << "openmp   " << tp << " s  (speedup " << ts / tp << ")\n"
            << "identical results: " << (same ? "yes" : "NO") << "\n";
  return same ? 0 : 1;
}
