#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "deblur/linalg.hpp"

namespace deblur {

/// Sparse cyclic point-spread function: signed pixel offset -> nonnegative
/// weight. Weights sum to 1 so blurring conserves total intensity.
class Kernel {
public:
    /// Validates: distinct offsets (map enforces), weights >= 0, sum within
    /// 1e-12 of 1.
    static Kernel from_taps(const std::map<int, double>& taps);

    const std::map<int, double>& taps() const { return taps_; }
    double weight_at(int offset) const;
    std::size_t tap_count() const { return taps_.size(); }
    int max_abs_offset() const;
    /// True when weight(d) == weight(-d) for every tap (within 1e-15).
    bool is_symmetric() const;

private:
    std::map<int, double> taps_;
};

/// Center 0.550, nearest neighbors 0.225 each.
Kernel kernel_3bin();
/// Center and nearest neighbors 0.250 each, next-nearest 0.125 each.
Kernel kernel_5bin();
/// Single unit tap at offset 0; blurring with it is the identity map.
Kernel kernel_identity();

/// Expand a kernel into the dense n-by-n cyclic transfer matrix:
/// entry (j, i) is the kernel weight at offset (j - i) mod n.
/// Throws std::invalid_argument when n cannot hold the kernel support
/// (offsets colliding modulo n, or an offset of magnitude >= n).
Matrix circulant_matrix(const Kernel& kernel, std::size_t n);

/// g = T F. Dimensions must match.
Image blur(const Matrix& transfer, const Image& original);

/// Cyclic shift: pixel i of the input lands at pixel (i + s) mod n.
Image shift_image(const Image& x, long s);
/// Cyclic reflection around `center`: pixel i lands at (2*center - i) mod n.
Image reflect_image(const Image& x, std::size_t center);

/// True when every value lies in [0, 1] (within `slack`). Restored images may
/// legitimately fail this; callers flag rather than reject.
bool is_within_grayscale(const Image& x, double slack = 0.0);

/// Declarative test-image descriptor.
struct GeneratorDescriptor {
    enum class Kind { delta, ramp, background_plus_delta, custom };
    Kind kind = Kind::delta;
    std::size_t index = 0;   // delta / background_plus_delta peak position
    std::size_t start = 0;   // ramp first pixel
    std::size_t length = 0;  // ramp pixel count (wraps cyclically)
    double height = 1.0;     // delta / ramp intensity
    double background = 0.0; // background_plus_delta base level
    double bump = 0.0;       // background_plus_delta elevation at `index`
    Image values;            // custom

    static GeneratorDescriptor delta(std::size_t index, double height);
    static GeneratorDescriptor ramp(std::size_t start, std::size_t length, double height);
    static GeneratorDescriptor background_plus_delta(double background, std::size_t index,
                                                     double bump);
    static GeneratorDescriptor custom(Image values);
};

/// Realize a descriptor as a length-n image. Generated physical images keep
/// intensities inside [0, 1]; out-of-range parameters or indices throw.
Image generate_image(const GeneratorDescriptor& descriptor, std::size_t n);

}  // namespace deblur
