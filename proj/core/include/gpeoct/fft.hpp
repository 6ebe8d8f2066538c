#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace gpeoct {

using cplx = std::complex<double>;

namespace detail {
struct FftPlanDeleter {
    void operator()(void* plan) const;
};
} // namespace detail

/// In-place complex FFT of a fixed size, 1D or 2D row-major. Plan creation
/// is serialized internally (the planner is not reentrant); each instance
/// may then be used from its own thread. The forward transform uses the
/// e^{-ikx} sign convention and is unscaled; the inverse applies 1/N.
class Fft {
public:
    Fft(int n0);          // 1D
    Fft(int n0, int n1);  // 2D, row-major with n0 slowest
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&&) = default;
    Fft& operator=(Fft&&) = default;

    int size() const { return total_; }

    void forward(cplx* data) const;
    void inverse(cplx* data) const;
    void forward(std::vector<cplx>& data) const { forward(data.data()); }
    void inverse(std::vector<cplx>& data) const { inverse(data.data()); }

private:
    int total_ = 0;
    std::unique_ptr<void, detail::FftPlanDeleter> fwd_;
    std::unique_ptr<void, detail::FftPlanDeleter> bwd_;
};

} // namespace gpeoct
