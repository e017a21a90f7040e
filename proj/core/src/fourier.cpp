#include "fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace qmarket::detail {

namespace {

std::mutex plan_mutex;

fftw_plan cached_plan(int n, int sign) {
    // FFTW_UNALIGNED lets one plan serve any caller buffer of the right size.
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find({n, sign});
    if (it != cache.end()) return it->second;
    fftw_complex* scratch = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    cache.emplace(std::make_pair(n, sign), plan);
    return plan;
}

void execute(std::complex<double>* data, int n, int sign) {
    fftw_plan plan = cached_plan(n, sign);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
}

} // namespace

void fft_forward(std::complex<double>* data, int n) { execute(data, n, FFTW_FORWARD); }

void fft_backward(std::complex<double>* data, int n) { execute(data, n, FFTW_BACKWARD); }

} // namespace qmarket::detail
