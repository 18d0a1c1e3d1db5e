#pragma once

#include <stdexcept>

namespace lwtsim {

/// Round `value` up to the next multiple of `multiple`.
constexpr int align_up(int value, int multiple) {
    if (multiple <= 0)
        throw std::invalid_argument("align_up: multiple must be positive");
    if (value < 0)
        throw std::invalid_argument("align_up: value must be non-negative");
    return (value + multiple - 1) / multiple * multiple;
}

} // namespace lwtsim
