#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace wsn {

// Simulation invariant violations are programming errors; they throw so that
// tests fail loudly in every build type.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

namespace detail {
[[noreturn]] inline void invariantFail(const char* expr, const char* file, int line,
                                       const std::string& msg) {
    std::ostringstream os;
    os << "invariant failed: " << expr << " at " << file << ":" << line;
    if (!msg.empty())
        os << " (" << msg << ")";
    throw InvariantError(os.str());
}
} // namespace detail

} // namespace wsn

#define WSN_ASSERT(expr, ...)                                                              \
    do {                                                                                   \
        if (!(expr))                                                                       \
            ::wsn::detail::invariantFail(#expr, __FILE__, __LINE__, std::string{__VA_ARGS__}); \
    } while (0)
