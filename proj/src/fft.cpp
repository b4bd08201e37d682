#include "fwm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fwm {

namespace {

// FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
// so results are bit-identical wherever the vector happens to live.
fftw_plan cached_plan(int nx, int ny, int sign) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(nx, ny, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(nx) * ny);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_2d(ny, nx, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(key, p);
    return p;
}

void execute(std::vector<cplx>& data, int nx, int ny, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cached_plan(nx, ny, sign), buf, buf);
}

}  // namespace

void fft2d_forward(std::vector<cplx>& data, int nx, int ny) { execute(data, nx, ny, FFTW_FORWARD); }

void fft2d_inverse(std::vector<cplx>& data, int nx, int ny) {
    execute(data, nx, ny, FFTW_BACKWARD);
    const double s = 1.0 / (static_cast<double>(nx) * ny);
    for (cplx& v : data) v *= s;
}

}  // namespace fwm
