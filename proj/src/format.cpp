#include "patchlum/format.hpp"

#include <charconv>

namespace patchlum {

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    (void)ec;
    return std::string(buffer, ptr);
}

}  // namespace patchlum
