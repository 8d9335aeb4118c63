#pragma once

#include <complex>
#include <vector>

namespace coughdet {

/// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

/// |FFT(x)|^2 / n for the first n/2+1 bins; x is zero-padded to n.
std::vector<double> power_spectrum(const std::vector<double>& x, std::size_t n);

}  // namespace coughdet
