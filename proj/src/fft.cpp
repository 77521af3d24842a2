#include "pns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <sstream>

namespace pns {
namespace {

// One cached FFTW plan pair per grid shape, executing in an owned aligned
// buffer. FFTW_ESTIMATE keeps planning deterministic across runs.
class PlanCache {
  public:
    struct Entry {
        fftw_complex* buf = nullptr;
        fftw_plan forward = nullptr;
        fftw_plan backward = nullptr;
        std::size_t size = 0;
    };

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    // Runs `fn(buf)` with the plan pair for `grid` held under the cache lock.
    template <typename Fn>
    void with_entry(const BoxGrid& grid, Fn&& fn) {
        std::lock_guard<std::mutex> lock(mutex_);
        fn(entry(grid));
    }

  private:
    Entry& entry(const BoxGrid& grid) {
        auto key = std::make_pair(grid.d, grid.n);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;

        Entry e;
        e.size = grid.points();
        e.buf = fftw_alloc_complex(e.size);
        int dims[3] = {grid.n, grid.n, grid.n};
        e.forward = fftw_plan_dft(grid.d, dims, e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        e.backward = fftw_plan_dft(grid.d, dims, e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!e.forward || !e.backward)
            throw Error(ErrorKind::IoFailure, "fftw plan creation failed");
        return entries_.emplace(key, e).first->second;
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, Entry> entries_;
};

}  // namespace

void fft_forward_inplace(const BoxGrid& grid, Complex* buf) {
    PlanCache::instance().with_entry(grid, [&](PlanCache::Entry& e) {
        fftw_complex* raw = e.buf;
        for (std::size_t i = 0; i < e.size; ++i) {
            raw[i][0] = buf[i].real();
            raw[i][1] = buf[i].imag();
        }
        fftw_execute(e.forward);
        const double scale = 1.0 / static_cast<double>(e.size);
        for (std::size_t i = 0; i < e.size; ++i)
            buf[i] = Complex(raw[i][0] * scale, raw[i][1] * scale);
    });
}

void fft_inverse_inplace(const BoxGrid& grid, Complex* buf) {
    PlanCache::instance().with_entry(grid, [&](PlanCache::Entry& e) {
        fftw_complex* raw = e.buf;
        for (std::size_t i = 0; i < e.size; ++i) {
            raw[i][0] = buf[i].real();
            raw[i][1] = buf[i].imag();
        }
        fftw_execute(e.backward);
        for (std::size_t i = 0; i < e.size; ++i) buf[i] = Complex(raw[i][0], raw[i][1]);
    });
}

SpectralField transform_forward(const PhysicalField& samples) {
    const std::size_t npts = samples.grid.points();
    const std::size_t expected = npts * static_cast<std::size_t>(samples.components);
    if (samples.components < 1 || samples.values.size() != expected) {
        std::ostringstream msg;
        msg << "sample count " << samples.values.size() << " does not match expected "
            << expected << " (" << samples.components << " component(s) on N^d = " << npts
            << ")";
        throw Error(ErrorKind::ShapeMismatch, msg.str());
    }

    SpectralField out(samples.grid, samples.components);
    std::vector<Complex> work(npts);
    for (int c = 0; c < samples.components; ++c) {
        const double* src = samples.component(c);
        for (std::size_t i = 0; i < npts; ++i) work[i] = Complex(src[i], 0.0);
        fft_forward_inplace(samples.grid, work.data());
        Complex* dst = out.component(c);
        for (std::size_t i = 0; i < npts; ++i) dst[i] = work[i];
    }
    return out;
}

PhysicalField transform_inverse(const SpectralField& field) {
    const std::size_t npts = field.points();
    PhysicalField out(field.grid(), field.components());
    std::vector<Complex> work(npts);
    for (int c = 0; c < field.components(); ++c) {
        const Complex* src = field.component(c);
        for (std::size_t i = 0; i < npts; ++i) work[i] = src[i];
        fft_inverse_inplace(field.grid(), work.data());
        double* dst = out.component(c);
        for (std::size_t i = 0; i < npts; ++i) dst[i] = work[i].real();
    }
    return out;
}

}  // namespace pns
