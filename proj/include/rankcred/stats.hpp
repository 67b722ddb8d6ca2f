#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace rankcred {

using Rng = std::mt19937_64;

// Independent stream for (seed, path...). Used to give every chain,
// cell and replication its own generator.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {});

// Standard normal quantile z_q, 0 < q < 1.
double normal_quantile(double q);

// Type-7 empirical quantile of already sorted data (linear interpolation
// between order statistics at h = (n-1) p).
double quantile_sorted(std::span<const double> sorted, double p);

// Same, on unsorted data (copies and sorts).
double quantile(std::span<const double> values, double p);

double log_beta(double a, double b);

}  // namespace rankcred
