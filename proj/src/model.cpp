#include "deblur/model.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace deblur {

namespace {

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace

Kernel Kernel::from_taps(const std::map<int, double>& taps) {
    if (taps.empty()) throw std::invalid_argument("kernel: at least one tap required");
    double total = 0.0;
    for (const auto& [offset, weight] : taps) {
        (void)offset;
        if (!std::isfinite(weight) || weight < 0.0)
            throw std::invalid_argument("kernel: weights must be finite and nonnegative");
        total += weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("kernel: weights must sum to 1 within 1e-12");
    Kernel k;
    k.taps_ = taps;
    return k;
}

double Kernel::weight_at(int offset) const {
    auto it = taps_.find(offset);
    return it == taps_.end() ? 0.0 : it->second;
}

int Kernel::max_abs_offset() const {
    int m = 0;
    for (const auto& [offset, weight] : taps_) {
        (void)weight;
        m = std::max(m, std::abs(offset));
    }
    return m;
}

bool Kernel::is_symmetric() const {
    for (const auto& [offset, weight] : taps_)
        if (std::fabs(weight - weight_at(-offset)) > 1e-15) return false;
    return true;
}

Kernel kernel_3bin() {
    return Kernel::from_taps({{0, 0.550}, {1, 0.225}, {-1, 0.225}});
}

Kernel kernel_5bin() {
    return Kernel::from_taps({{0, 0.250}, {1, 0.250}, {-1, 0.250}, {2, 0.125}, {-2, 0.125}});
}

Kernel kernel_identity() { return Kernel::from_taps({{0, 1.0}}); }

Matrix circulant_matrix(const Kernel& kernel, std::size_t n) {
    if (n == 0) throw std::invalid_argument("circulant_matrix: n must be positive");
    const long ln = static_cast<long>(n);
    if (kernel.max_abs_offset() >= ln)
        throw std::invalid_argument("circulant_matrix: kernel offset magnitude must be < n");
    // Distinct offsets must stay distinct modulo n, else taps would overlap.
    std::map<long, double> residues;
    for (const auto& [offset, weight] : kernel.taps()) {
        auto [it, inserted] = residues.emplace(mod(offset, ln), weight);
        (void)it;
        if (!inserted)
            throw std::invalid_argument("circulant_matrix: n too small for kernel support");
    }
    Matrix t(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            auto it = residues.find(mod(static_cast<long>(j) - static_cast<long>(i), ln));
            if (it != residues.end()) t(j, i) = it->second;
        }
    return t;
}

Image blur(const Matrix& transfer, const Image& original) {
    if (transfer.rows() != transfer.cols())
        throw std::invalid_argument("blur: transfer matrix must be square");
    return transfer.apply(original);
}

Image shift_image(const Image& x, long s) {
    const long n = static_cast<long>(x.size());
    if (n == 0) return {};
    Image out(x.size());
    for (long i = 0; i < n; ++i) out[mod(i + s, n)] = x[i];
    return out;
}

Image reflect_image(const Image& x, std::size_t center) {
    const long n = static_cast<long>(x.size());
    if (n == 0) return {};
    Image out(x.size());
    for (long i = 0; i < n; ++i) out[mod(2 * static_cast<long>(center) - i, n)] = x[i];
    return out;
}

bool is_within_grayscale(const Image& x, double slack) {
    for (double v : x)
        if (!(v >= -slack && v <= 1.0 + slack)) return false;
    return true;
}

GeneratorDescriptor GeneratorDescriptor::delta(std::size_t index, double height) {
    GeneratorDescriptor d;
    d.kind = Kind::delta;
    d.index = index;
    d.height = height;
    return d;
}

GeneratorDescriptor GeneratorDescriptor::ramp(std::size_t start, std::size_t length,
                                              double height) {
    GeneratorDescriptor d;
    d.kind = Kind::ramp;
    d.start = start;
    d.length = length;
    d.height = height;
    return d;
}

GeneratorDescriptor GeneratorDescriptor::background_plus_delta(double background,
                                                               std::size_t index, double bump) {
    GeneratorDescriptor d;
    d.kind = Kind::background_plus_delta;
    d.background = background;
    d.index = index;
    d.bump = bump;
    return d;
}

GeneratorDescriptor GeneratorDescriptor::custom(Image values) {
    GeneratorDescriptor d;
    d.kind = Kind::custom;
    d.values = std::move(values);
    return d;
}

namespace {

void require_unit_range(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string("generate_image: ") + name +
                                    " must lie in [0, 1]");
}

}  // namespace

Image generate_image(const GeneratorDescriptor& descriptor, std::size_t n) {
    if (n == 0) throw std::invalid_argument("generate_image: n must be positive");
    using Kind = GeneratorDescriptor::Kind;
    switch (descriptor.kind) {
        case Kind::delta: {
            if (descriptor.index >= n)
                throw std::invalid_argument("generate_image: delta index out of range");
            require_unit_range(descriptor.height, "height");
            Image img(n, 0.0);
            img[descriptor.index] = descriptor.height;
            return img;
        }
        case Kind::ramp: {
            if (descriptor.start >= n)
                throw std::invalid_argument("generate_image: ramp start out of range");
            if (descriptor.length == 0 || descriptor.length > n)
                throw std::invalid_argument("generate_image: ramp length must be in [1, n]");
            require_unit_range(descriptor.height, "height");
            Image img(n, 0.0);
            for (std::size_t k = 0; k < descriptor.length; ++k)
                img[(descriptor.start + k) % n] = descriptor.height;
            return img;
        }
        case Kind::background_plus_delta: {
            if (descriptor.index >= n)
                throw std::invalid_argument("generate_image: peak index out of range");
            require_unit_range(descriptor.background, "background");
            if (descriptor.bump < 0.0)
                throw std::invalid_argument("generate_image: bump must be nonnegative");
            require_unit_range(descriptor.background + descriptor.bump, "background + bump");
            Image img(n, descriptor.background);
            img[descriptor.index] = descriptor.background + descriptor.bump;
            return img;
        }
        case Kind::custom: {
            if (descriptor.values.size() != n)
                throw std::invalid_argument("generate_image: custom values length must equal n");
            for (double v : descriptor.values)
                if (!std::isfinite(v))
                    throw std::invalid_argument("generate_image: custom values must be finite");
            return descriptor.values;
        }
    }
    throw std::invalid_argument("generate_image: unknown descriptor kind");
}

}  // namespace deblur
