#pragma once

#include "dpln/params.hpp"
#include "dpln/rng.hpp"

namespace dpln {

// N(mean, sd^2) conditioned on x >= lower. Inverse-cdf through the survival
// function in the bulk; Robert's exponential-rejection sampler once the
// truncation point sits more than 4 sd into the upper tail.
double truncated_normal_lower(double mean, double sd, double lower, RngStream& rng);

// N(mean, sd^2) conditioned on x <= upper.
double truncated_normal_upper(double mean, double sd, double upper, RngStream& rng);

// Exponential(rate) conditioned on x >= lower (lower may be any real;
// support starts at max{lower, 0}). Exact inverse cdf via memorylessness.
double truncated_exponential(double rate, double lower, RngStream& rng);

}  // namespace dpln
