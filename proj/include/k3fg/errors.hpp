#pragma once

#include <stdexcept>
#include <string>

namespace k3fg {

// Raised when a computation would need more p-adic precision than the caller
// supplied; carries an estimate of the precision that would have sufficed.
class insufficient_precision : public std::runtime_error {
public:
    insufficient_precision(const std::string& what, long needed)
        : std::runtime_error(what), needed_(needed) {}
    long needed() const { return needed_; }

private:
    long needed_;
};

// A congruence the underlying theory guarantees failed to hold.  Carries the
// witness pair (mu, s) that violated it.
class congruence_violation : public std::runtime_error {
public:
    congruence_violation(const std::string& what, long mu, long s)
        : std::runtime_error(what), mu_(mu), s_(s) {}
    long mu() const { return mu_; }
    long s() const { return s_; }

private:
    long mu_;
    long s_;
};

// A closed-form identity check failed; both sides are kept for the report.
class identity_violation : public std::runtime_error {
public:
    identity_violation(const std::string& what, std::string lhs, std::string rhs)
        : std::runtime_error(what), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
    const std::string& lhs() const { return lhs_; }
    const std::string& rhs() const { return rhs_; }

private:
    std::string lhs_;
    std::string rhs_;
};

class divisibility_violation : public std::runtime_error {
public:
    divisibility_violation(const std::string& what, long index)
        : std::runtime_error(what), index_(index) {}
    long index() const { return index_; }

private:
    long index_;
};

// Signals a generator bug: an integrality guaranteed by the theory failed.
class integrality_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class unsupported_operation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace k3fg
