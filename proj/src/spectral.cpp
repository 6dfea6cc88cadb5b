#include "isingqb/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace isingqb {

void fft_radix2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    }
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = data[i + j];
                const std::complex<double> v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

double dominant_angular_frequency(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    if (n < 8 || y.size() != n) {
        throw std::invalid_argument("dominant_angular_frequency: need aligned series, n >= 8");
    }
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
            throw std::invalid_argument("dominant_angular_frequency: grid must be uniform");
        }
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    std::size_t padded = 1;
    while (padded < 8 * n) padded <<= 1;
    std::vector<std::complex<double>> buf(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));  // Hann
        buf[i] = (y[i] - mean) * w;
    }
    fft_radix2(buf);

    const std::size_t half = padded / 2;
    std::size_t peak = 1;
    double peak_mag = 0.0;
    for (std::size_t i = 1; i < half; ++i) {
        const double mag = std::abs(buf[i]);
        if (mag > peak_mag) {
            peak_mag = mag;
            peak = i;
        }
    }
    double delta = 0.0;
    if (peak > 1 && peak + 1 < half) {
        const double lm = std::log(std::max(std::abs(buf[peak - 1]), 1e-300));
        const double cm = std::log(std::max(peak_mag, 1e-300));
        const double rm = std::log(std::max(std::abs(buf[peak + 1]), 1e-300));
        const double denom = lm - 2.0 * cm + rm;
        if (denom < -1e-12) delta = 0.5 * (lm - rm) / denom;
    }
    const double freq_bin = 1.0 / (static_cast<double>(padded) * dt);
    return 2.0 * M_PI * (static_cast<double>(peak) + delta) * freq_bin;
}

}  // namespace isingqb
