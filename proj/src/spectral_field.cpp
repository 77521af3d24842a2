#include "pns/spectral_field.hpp"

#include <algorithm>
#include <cmath>

namespace pns {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!same_shape(o)) throw Error(ErrorKind::ShapeMismatch, "operator+=: shapes differ");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!same_shape(o)) throw Error(ErrorKind::ShapeMismatch, "operator-=: shapes differ");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& a : amps_) a *= s;
    return *this;
}

double SpectralField::l2_norm() const {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return std::sqrt(sum * grid_.volume());
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& a : amps_) m = std::max(m, std::abs(a));
    return m;
}

double SpectralField::hermitian_defect() const {
    const int n = grid_.n;
    const std::size_t npts = points();
    double worst = 0.0;
    const double scale = std::max(max_abs(), 1e-300);
    for (int c = 0; c < components_; ++c) {
        const Complex* a = component(c);
        for (std::size_t flat = 0; flat < npts; ++flat) {
            // mirror index: each axis i -> (N - i) mod N
            std::size_t tmp = flat;
            std::size_t mul = npts / n;
            std::size_t mirror = 0;
            for (int axis = 0; axis < grid_.d; ++axis) {
                int i = static_cast<int>(tmp / mul);
                tmp %= mul;
                mirror += static_cast<std::size_t>((n - i) % n) * mul;
                if (axis + 1 < grid_.d) mul /= n;
            }
            double defect = std::abs(a[flat] - std::conj(a[mirror]));
            worst = std::max(worst, defect / scale);
        }
    }
    return worst;
}

bool SpectralField::is_finite() const {
    for (const auto& a : amps_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    return true;
}

}  // namespace pns
