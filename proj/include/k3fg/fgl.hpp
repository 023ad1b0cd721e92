#pragma once

#include "k3fg/families.hpp"
#include "k3fg/fp_poly.hpp"
#include "k3fg/padic.hpp"
#include "k3fg/series.hpp"

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace k3fg {

// The logarithm of a one-dimensional formal group: l(tau) = sum_j c_j tau^j/j
// with c_1 = 1.  Indexed here by the tau exponent j; for catalog families
// c_j is the family's a((j-1)/stride) and vanishes off the stride pattern.
// Coefficients extend on demand behind a shared-read/exclusive-write cache.
class FormalGroupLogarithm {
public:
    static FormalGroupLogarithm from_family(FamilyInstance inst, long precision);
    // A custom logarithm given by the plain series coefficients of tau^j
    // (index 0 unused, index 1 must be 1).
    static FormalGroupLogarithm custom(unsigned long p, long precision,
                                       std::vector<BigRational> series_coeffs,
                                       std::string provenance = "custom");

    unsigned long p() const { return p_; }
    long precision() const { return precision_; }
    const FamilyInstance* family() const { return family_ ? &*family_ : nullptr; }
    const std::string& provenance() const { return provenance_; }

    // a-value attached to tau^j/j (the family's a(m) with j = stride*m+1).
    BigRational a_coeff_exact(unsigned long j) const;
    PadicInt a_coeff_mod(unsigned long j, long prec) const;
    // Exact valuation when a factorial closed form makes it free (lambda-free
    // families); LONG_MAX encodes an identically zero coefficient.
    std::optional<long> a_coeff_valuation(unsigned long j) const;

    // Coefficient of tau^j in l itself, i.e. a_coeff / j.
    BigRational series_coeff_exact(unsigned long j) const;

private:
    struct CoeffCache {
        std::shared_mutex mutex;
        std::map<unsigned long, PadicInt> values;
    };

    unsigned long p_ = 0;
    long precision_ = 0;
    std::optional<FamilyInstance> family_;
    std::vector<BigRational> custom_; // plain series coefficients when custom
    std::string provenance_;
    std::shared_ptr<CoeffCache> cache_ = std::make_shared<CoeffCache>();
};

// ---------------------------------------------------------------------------
// Group law construction.
// ---------------------------------------------------------------------------

struct GroupLaw {
    unsigned long p;
    long precision;
    int cutoff;
    BivariateTruncatedSeries<PadicInt> g;
    BivariateTruncatedSeries<BigRational> g_exact;
};

// G(tau_1, tau_2) = l^{-1}(l(tau_1) + l(tau_2)) through total degree D,
// computed exactly over the rationals and reduced mod p^N.  Throws
// integrality_error if any coefficient fails to be p-integral (the theory
// guarantees integrality) and insufficient_precision when truncated parameter
// lifts cannot support the requested precision.
GroupLaw build_group_law(const FormalGroupLogarithm& log, int cutoff);

bool group_law_identity_ok(const GroupLaw& law);    // G(tau, 0) = tau
bool group_law_commutative(const GroupLaw& law);    // G(t1, t2) = G(t2, t1)
bool group_law_associative(const GroupLaw& law);    // mod the cutoff

// ---------------------------------------------------------------------------
// Height classification.
// ---------------------------------------------------------------------------

enum class HeightClass { Height1, Height2, SupersingularUpTo, UndeterminedAtLeast3 };

const char* height_class_name(HeightClass c);

struct ValuationEntry {
    int s;              // index is p^s
    long v_lower;       // established lower bound for v_p(a(p^s - 1))
    bool exact;         // v_lower is the exact valuation
    long required;      // bound needed for the supersingular pattern
};

// Classification plus the residues and valuations it was derived from; the
// classification is recomputable from the evidence alone.
struct HeightReport {
    HeightClass cls;
    int s_bound = 0;                        // the supersingular screening bound used
    unsigned long p = 0;
    unsigned long a_p_residue = 0;          // a(p-1) mod p
    std::optional<unsigned long> v2_residue; // ((a(p^2-1) - a(p-1)^{p+1})/p) mod p
    std::vector<ValuationEntry> valuations;
    std::string provenance;
};

HeightClass reclassify_from_evidence(const HeightReport& r);

// Height1 iff a(p-1) is a unit; else Height2 iff the V2 quotient is a unit
// (its integrality is asserted); else supersingular screening up to s_max.
HeightReport height_classify(const FormalGroupLogarithm& log, int s_max);

// ---------------------------------------------------------------------------
// The V1/V2 polynomials of the quasi-diagonal families, as polynomials in
// x = (2^10 3^6 lambda^12)^{-1} resp. x = (4^4 5^5 6^6 lambda^15)^{-1}.
// ---------------------------------------------------------------------------

struct VPolynomials {
    FpPoly v1;
    FpPoly v2;
};

VPolynomials v_polynomials(FamilyId id, unsigned long p);

// The height the V-criterion predicts at a given value of x.
HeightClass classify_from_v(const VPolynomials& v, std::uint64_t x);

// The x-image of a nonzero lambda in F_p: (2^10 3^6 lambda^12)^{-1} for the
// quartic family, (4^4 5^5 6^6 lambda^15)^{-1} for the sextic one.
std::uint64_t v_x_image(FamilyId id, unsigned long p, unsigned long lambda);

// ---------------------------------------------------------------------------
// Unit roots via the coefficient congruences.
// ---------------------------------------------------------------------------

struct CongruenceWitness {
    long mu;
    int s;
    bool vacuous; // both sides vanished (off-stride index)
};

struct UnitRootReport {
    PadicUnitCertificate alpha; // at precision s_max + 1
    int s_max;
    long mu_max;
    std::vector<CongruenceWitness> witnesses;
};

// alpha with a(mu p^{s+1} - 1) = alpha * a(mu p^s - 1) mod p^{s+1} verified
// for all mu <= mu_max, s <= s_max.  Requires a height-one logarithm.  Throws
// congruence_violation carrying (mu, s) if any witness fails.
UnitRootReport unit_root_sb(const FormalGroupLogarithm& log, int s_max, long mu_max);

// ---------------------------------------------------------------------------
// p-adic limit identities (unit root against the truncated Dwork ratio of the
// limit hypergeometric series; Teichmuller parameter lifts).
// ---------------------------------------------------------------------------

struct LimitIdentityReport {
    PadicInt alpha;        // congruence-chain value (the authoritative side)
    PadicInt closed_form;  // hypergeometric ratio side
    bool equal;
    std::string description;
};

// Supported: jacobi-quartic (h(1)^2), the quartic pencils
// (lambda^{p-1} f(c lambda^{-4})) and the sextic pencils
// ((-3 lambda)^{(p-1)/2} g(c lambda^{-3})).  Parameters are F_p residues;
// Teichmuller lifts are taken internally.  Throws identity_violation on
// mismatch.
LimitIdentityReport limit_identity_check(FamilyId id, unsigned long p,
                                         const std::vector<unsigned long>& c_residues,
                                         unsigned long lambda_residue, long precision);

// ---------------------------------------------------------------------------
// Supersingular divisibilities.
// ---------------------------------------------------------------------------

struct DivisibilityRow {
    unsigned long m;  // family index
    unsigned long j;  // tau index stride*m + 1
    long required;    // v_p(j)
    long valuation;   // established valuation of a(m) (LONG_MAX = identically 0)
};

struct DivisibilityReport {
    unsigned long p;
    unsigned long checked = 0;
    std::vector<DivisibilityRow> rows; // the nontrivial rows (required >= 1)
    // Jacobi-quartic extra: p^s | C((p^{2s}-1)/2, (p^{2s}-1)/4)
    std::vector<std::pair<int, long>> binomial_rows;
};

// Verifies v_p(a(m)) >= v_p(stride*m + 1) for every family index m <= m_bound
// with the tau index divisible by p (restricted to p^s | j with s <= s_max).
// Only the lambda-free families are supported, and p must lie in the family's
// supersingular congruence class.  Throws divisibility_violation on failure.
DivisibilityReport supersingular_divisibility(const FamilyInstance& inst, int s_max,
                                              unsigned long m_bound);

} // namespace k3fg
