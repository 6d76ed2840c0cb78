#include "uwr/common.hpp"

#include <charconv>

namespace uwr {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;  // cannot fail for double with this buffer size
    return std::string(buf, ptr);
}

}  // namespace uwr
