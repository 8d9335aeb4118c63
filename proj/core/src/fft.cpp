#include "coughdet/fft.hpp"

#include <cmath>
#include <numbers>

#include "coughdet/errors.hpp"

namespace coughdet {

void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigInvalid("FFT size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<double> power_spectrum(const std::vector<double>& x, std::size_t n) {
    std::vector<std::complex<double>> a(n);
    const std::size_t m = std::min(x.size(), n);
    for (std::size_t i = 0; i < m; ++i) a[i] = x[i];
    fft_radix2(a);
    std::vector<double> p(n / 2 + 1);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(a[i]) / static_cast<double>(n);
    return p;
}

}  // namespace coughdet
