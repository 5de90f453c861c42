#pragma once

#include <cstddef>
#include <string>

#include "deblur/linalg.hpp"

namespace deblur {

/// Parses a command-line image argument:
///   delta:I            unit peak at pixel I
///   ramp:START:LEN     flat top of 1s over LEN pixels from START (cyclic)
///   bgdelta:BG:I:BUMP  background BG, pixel I elevated by BUMP
///   uniform:V          every pixel at V
///   @path              .json number array, or CSV (last column, header ok)
/// Inline forms need n > 0; @path accepts any n and checks it when n > 0.
Image parse_image_argument(const std::string& arg, std::size_t n);

/// Entry point behind the executable. Exit codes: 0 success, 1 golden-check
/// failure, 2 usage/config/IO error, 3 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace deblur
