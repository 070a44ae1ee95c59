#ifndef SCS_ERRORS_HPP
#define SCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scs {

// Bad user input (malformed words, out-of-range indices, invalid files).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured cap was exceeded (sheet counts, retry budgets).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A construction produced an object that fails its own validation.
// These indicate a bug (or a falsified theorem) and must never be swallowed.
struct VerificationError : std::logic_error {
    explicit VerificationError(const std::string& msg) : std::logic_error(msg) {}
};

// Outcome of re-checking a certificate without trusting its construction.
struct VerifyResult {
    bool ok = false;
    std::string reason;  // empty on success
};

}  // namespace scs

#endif
