#pragma once

#include <stdexcept>
#include <string>

namespace auctionlab {

// Base error for all domain failures. `code` is a stable machine-readable
// identifier; CLI layers map it to exit statuses.
class AuctionError : public std::runtime_error {
public:
    AuctionError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Bad user input (malformed files, malformed rationals, unknown fields).
// Distinct from AuctionError so the CLI can exit 2 instead of 1.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

inline AuctionError zero_density_error(const std::string& where) {
    return AuctionError("zero_density", "zero probability mass at evaluated point: " + where);
}
inline AuctionError off_grid_error(const std::string& what) {
    return AuctionError("off_grid", "value not on the admissible grid: " + what);
}
inline AuctionError not_regular_error(const std::string& what) {
    return AuctionError("not_regular", "distribution is not regular: " + what);
}
inline AuctionError not_standard_error(const std::string& what) {
    return AuctionError("not_standard", "distribution is not standard: " + what);
}

}  // namespace auctionlab
