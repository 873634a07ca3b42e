#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qrl {

// Error taxonomy mirrored by the C API status codes and CLI exit codes.
enum class ErrorKind {
    Parse,      // malformed descriptor / file
    Capacity,   // request exceeds configured caps
    Domain,     // precondition violated
    Invariant,  // a constructed object failed its own invariant
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }
[[noreturn]] inline void throw_capacity(const std::string& msg) { throw Error(ErrorKind::Capacity, msg); }
[[noreturn]] inline void throw_domain(const std::string& msg) { throw Error(ErrorKind::Domain, msg); }
[[noreturn]] inline void throw_invariant(const std::string& msg) { throw Error(ErrorKind::Invariant, msg); }

// Capacity caps. QRL_MAX_DIM overrides the hard dimension limit.
struct caps {
    static int max_dim() {
        static int v = [] {
            if (const char* e = std::getenv("QRL_MAX_DIM")) {
                long x = std::strtol(e, nullptr, 10);
                if (x > 0) return static_cast<int>(x);
            }
            return 1 << 16;
        }();
        return v;
    }
    static constexpr int max_dense_dim = 1 << 11;   // dense matrices
    static constexpr int max_diag_qubits = 20;      // implicit diagonal levels
    static constexpr int max_block_index = 16;      // factored block-product states
};

}  // namespace qrl
