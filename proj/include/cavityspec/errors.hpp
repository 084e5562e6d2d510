#ifndef CAVITYSPEC_ERRORS_HPP
#define CAVITYSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavityspec {

// Error taxonomy shared by all modules. The CLI maps kinds to exit codes
// (config -> 2, everything else that escapes -> 3), so throw with the kind
// that describes the *cause*, not the call site.
enum class errc {
    domain,    // argument outside a function's supported region
    accuracy,  // method ran out of iterations/terms before reaching tolerance
    range,     // result not representable
    data,      // inconsistent or degenerate input data
    config,    // bad run configuration (CLI / RunConfig)
    solver     // a solver failed in a way that is not the user's fault
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) {
    throw error(kind, msg);
}

} // namespace cavityspec

#endif
