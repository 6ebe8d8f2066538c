#include "gpeoct/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "gpeoct/errors.hpp"

namespace gpeoct {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

namespace detail {
void FftPlanDeleter::operator()(void* plan) const {
    if (!plan) return;
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan));
}
} // namespace detail

Fft::Fft(int n0) : total_(n0) {
    if (n0 < 1) throw DomainError("fft size must be positive");
    std::vector<cplx> buf(static_cast<size_t>(total_));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    std::lock_guard lock(planner_mutex());
    fwd_.reset(fftw_plan_dft_1d(n0, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
    bwd_.reset(fftw_plan_dft_1d(n0, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
}

Fft::Fft(int n0, int n1) : total_(n0 * n1) {
    if (n0 < 1 || n1 < 1) throw DomainError("fft sizes must be positive");
    std::vector<cplx> buf(static_cast<size_t>(total_));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    std::lock_guard lock(planner_mutex());
    fwd_.reset(fftw_plan_dft_2d(n0, n1, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
    bwd_.reset(fftw_plan_dft_2d(n0, n1, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED));
}

void Fft::forward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_.get()), p, p);
}

void Fft::inverse(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_.get()), p, p);
    const double scale = 1.0 / total_;
    for (int i = 0; i < total_; ++i) data[i] *= scale;
}

} // namespace gpeoct
