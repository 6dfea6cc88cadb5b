// spectral.hpp — radix-2 FFT and dominant-frequency extraction for the
// post-ramp oscillation checks.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace isingqb {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

// Angular frequency (rad/time) of the strongest spectral component of y(t)
// sampled on a uniform grid: mean subtraction, Hann window, 8x zero-padded
// FFT and parabolic interpolation of the log-magnitude peak.
double dominant_angular_frequency(std::span<const double> t, std::span<const double> y);

}  // namespace isingqb
