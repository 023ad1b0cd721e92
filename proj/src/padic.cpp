#include "k3fg/padic.hpp"

#include "k3fg/errors.hpp"

#include <sstream>
#include <stdexcept>

namespace k3fg {

PadicInt::PadicInt(unsigned long p, long precision, BigInt value)
    : p_(p), prec_(precision), value_(std::move(value)) {
    if (p < 2) throw std::domain_error("PadicInt: p must be a prime >= 2");
    if (precision < 1) throw std::domain_error("PadicInt: precision must be >= 1");
    reduce();
}

void PadicInt::reduce() {
    BigInt m = modulus();
    value_ %= m;
    if (value_ < 0) value_ += m;
}

PadicInt PadicInt::from_rational(const BigRational& x, unsigned long p, long precision) {
    if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), p))
        throw std::domain_error("PadicInt::from_rational: denominator not prime to p");
    BigInt m = p_power(p, static_cast<unsigned long>(precision));
    return PadicInt(p, precision, rational_mod(x, m));
}

std::optional<long> PadicInt::valuation() const {
    if (value_ == 0) return std::nullopt;
    long v = int_valuation(value_, p_);
    if (v >= prec_) return std::nullopt;
    return v;
}

namespace {
inline void check_compat(const PadicInt& a, const PadicInt& b) {
    if (a.p() != b.p()) throw std::domain_error("PadicInt: mixed primes");
}
} // namespace

PadicInt PadicInt::operator+(const PadicInt& o) const {
    check_compat(*this, o);
    long n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, value_ + o.value_);
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
    check_compat(*this, o);
    long n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, value_ - o.value_);
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
    check_compat(*this, o);
    long n = std::min(prec_, o.prec_);
    return PadicInt(p_, n, value_ * o.value_);
}

PadicInt PadicInt::operator-() const { return PadicInt(p_, prec_, -value_); }

bool PadicInt::operator==(const PadicInt& o) const {
    if (p_ != o.p_) return false;
    long n = std::min(prec_, o.prec_);
    BigInt m = p_power(p_, static_cast<unsigned long>(n));
    return (value_ - o.value_) % m == 0;
}

PadicInt PadicInt::mul_int(const BigInt& k) const { return PadicInt(p_, prec_, value_ * k); }

PadicInt PadicInt::pow(unsigned long e) const {
    BigInt m = modulus();
    BigInt r;
    mpz_powm_ui(r.get_mpz_t(), value_.get_mpz_t(), e, m.get_mpz_t());
    return PadicInt(p_, prec_, r);
}

PadicInt PadicInt::inverse() const {
    if (!is_unit()) throw std::domain_error("PadicInt::inverse: not a unit");
    return PadicInt(p_, prec_, mod_inverse(value_, modulus()));
}

PadicInt PadicInt::div_exact_p_pow(long s) const {
    if (s == 0) return *this;
    if (s < 0 || s >= prec_)
        throw insufficient_precision("PadicInt::div_exact_p_pow: precision too small", prec_ + s);
    BigInt q = p_power(p_, static_cast<unsigned long>(s));
    if (value_ % q != 0)
        throw integrality_error("PadicInt::div_exact_p_pow: value not divisible by p^" + std::to_string(s));
    return PadicInt(p_, prec_ - s, value_ / q);
}

PadicInt PadicInt::div_exact_int(const BigInt& k) const {
    if (k == 0) throw std::domain_error("PadicInt::div_exact_int: division by zero");
    long s = int_valuation(k, p_);
    BigInt unit = k / p_power(p_, static_cast<unsigned long>(s));
    PadicInt t = div_exact_p_pow(s);
    return PadicInt(p_, t.prec_, t.value_ * mod_inverse(unit, t.modulus()));
}

PadicInt PadicInt::with_precision(long n) const {
    if (n > prec_)
        throw insufficient_precision("PadicInt::with_precision: cannot raise precision", n);
    return PadicInt(p_, n, value_);
}

std::string PadicInt::to_string() const {
    std::ostringstream os;
    os << value_.get_str() << " + O(" << p_ << "^" << prec_ << ")";
    return os.str();
}

PadicUnitCertificate PadicUnitCertificate::certify(const PadicInt& x) {
    if (!x.is_unit()) throw std::domain_error("PadicUnitCertificate: element is not a unit");
    return PadicUnitCertificate{x, x.residue()};
}

PadicInt teichmuller(unsigned long c, unsigned long p, long precision) {
    c %= p;
    if (c == 0) return PadicInt(p, precision, 0);
    BigInt m = p_power(p, static_cast<unsigned long>(precision));
    BigInt x(static_cast<unsigned long>(c));
    // x -> x^p converges to the fixed point; each step gains a digit.
    for (long i = 0; i < precision; ++i) {
        BigInt next;
        mpz_powm_ui(next.get_mpz_t(), x.get_mpz_t(), p, m.get_mpz_t());
        if (next == x) break;
        x = next;
    }
    return PadicInt(p, precision, x);
}

PadicInt padic_gamma(const BigRational& x, unsigned long p, long precision) {
    if (p == 2) throw unsupported_operation("padic_gamma: p = 2 not supported");
    if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), p))
        throw std::domain_error("padic_gamma: argument is not p-integral");
    BigInt m = p_power(p, static_cast<unsigned long>(precision));
    BigInt rep = rational_mod(x, m); // integer representative in [0, p^N)
    // Gamma_p at the integer representative; continuity of Gamma_p for odd p
    // makes this exact mod p^N.  The product has < p^N terms, batched into
    // machine words.
    unsigned long n = mpz_get_ui(rep.get_mpz_t());
    BigInt acc(1);
    unsigned long batch = 1;
    for (unsigned long j = 1; j < n; ++j) {
        if (j % p == 0) continue;
        if (batch > (~0ul) / j) {
            acc *= batch;
            acc %= m;
            batch = 1;
        }
        batch *= j;
    }
    acc *= batch;
    acc %= m;
    if (n % 2 == 1) acc = -acc;
    return PadicInt(p, precision, acc);
}

} // namespace k3fg
