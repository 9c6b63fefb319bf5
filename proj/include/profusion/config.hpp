#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace profusion {

// Enumeration limits. Every algorithm in the library is enumeration based, so
// exceeding a cap is reported as an error instead of silently running forever.
struct Caps {
    std::uint64_t group_order = 50000;     // full enumeration of a group
    std::uint64_t p_group_order = 512;     // all_subgroups of a p-group
    std::uint64_t table_order = 4096;      // multiplication table materialized
    std::uint64_t general_lattice_order = 1024;  // all_subgroups of a non-p-group
    std::uint64_t aut_order = 2000;        // K-sweeps over Aut_F(Q)
    std::uint64_t subgroup_count = 200000; // lattice size
    int depth = 8;                         // tower depth
};

// Process-wide caps. Set once at startup (CLI flags, test fixtures); reads are
// frequent and writes are not expected to race with running computations.
const Caps& caps();
void set_caps(const Caps& c);

// Temporarily overrides the caps, restoring the previous values on exit.
class CapsOverride {
public:
    explicit CapsOverride(const Caps& c);
    ~CapsOverride();
    CapsOverride(const CapsOverride&) = delete;
    CapsOverride& operator=(const CapsOverride&) = delete;

private:
    Caps saved_;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured enumeration cap was exceeded (CLI exit code 3).
class CapExceeded : public Error {
public:
    using Error::Error;
};

// A mathematical invariant failed: a search that theory says must succeed did
// not, or a computed object violates its contract (CLI exit code 2).
class IntegrityError : public Error {
public:
    using Error::Error;
};

// A search that must succeed on valid input found nothing (an extension, a
// fully normalized representative, a factoring level). Usually means the
// system is not saturated.
class NotFound : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

// An Alperin decomposition step failed; the input system is not saturated.
class NotSaturated : public NotFound {
public:
    using NotFound::NotFound;
};

// Malformed input: bad spec file, invalid permutation, precondition violated by
// the caller (CLI exit code 1).
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace profusion
