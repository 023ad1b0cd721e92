#pragma once

#include "k3fg/exact.hpp"
#include "k3fg/hyper.hpp"
#include "k3fg/padic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3fg {

enum class FamilyId {
    JacobiQuartic,
    DiagonalQuartic,
    QuarticPencil1,
    QuarticPencil2,
    QuarticPencil3,
    DiagonalSextic,
    SexticPencil1,
    SexticPencil2,
    SexticPencil3,
    SexticPencil4,
    QuasiDiagonalQuartic,
    QuasiDiagonalSextic,
};

const char* family_name(FamilyId id);
std::optional<FamilyId> family_by_name(const std::string& name);

// Catalog entry: binds a defining equation to its logarithm coefficient
// generator.  `stride` is the exponent pattern of the logarithm: coefficient
// m sits on tau^(stride*m+1)/(stride*m+1).  `zero_mod` is the residue pattern
// of vanishing coefficients when the pencil parameter is absent or zero.
struct K3FamilySpec {
    FamilyId id;
    std::string name;
    int stride;                    // 1 quartic hypersurfaces, 2 double sextics, 4 Jacobi quartic
    int num_vars;                  // projective variables of the defining form (0 for Jacobi)
    std::vector<std::vector<int>> monomials; // exponent matrix of the principal part
    std::vector<std::string> param_names;    // c_1.. and lambda when present
    bool has_lambda;
    int lambda_multiplier;         // the k of the -k*lambda*(product) term (4, 3, 12 or 15)
    std::vector<int> lambda_monomial;
    int zero_mod;                  // a(m) = 0 unless zero_mod | m at lambda = 0
    std::string generator;         // human-readable closed form of a(m)
};

const std::vector<K3FamilySpec>& family_catalog();
const K3FamilySpec& family_spec(FamilyId id);

// A family bound to a prime and exact parameter lifts.  Parameter values are
// exact integers (any lift of the F_p residues; Teichmuller representatives
// are themselves integers mod p^M).  `param_precision` records the p-adic
// accuracy of the lift when it stands for a non-rational element like a
// Teichmuller representative; absent means the lift is exact.
struct FamilyInstance {
    const K3FamilySpec* spec;
    unsigned long p;
    std::vector<BigInt> c;     // size num monomials' coefficients (empty for Jacobi)
    BigInt lambda;             // ignored when !spec->has_lambda
    std::optional<long> param_precision;
    bool smoothness_checked = false; // the catalog never verifies smoothness

    static FamilyInstance make(FamilyId id, unsigned long p, std::vector<BigInt> c = {},
                               BigInt lambda = BigInt(0),
                               std::optional<long> param_precision = std::nullopt);

    // Product of the c_i, exact.
    BigInt c_product() const;
};

// m-th logarithm coefficient a(m) as an exact rational (in fact an integer
// for every catalog family).  Index convention: coefficient of
// tau^(stride*m+1)/(stride*m+1).
BigRational family_log_coeff_exact(const FamilyInstance& inst, unsigned long m);

// Same coefficient mod p^N.  Integrality is asserted; a failure signals a
// generator bug.  Throws if a c_i vanishes mod p.
PadicInt family_log_coeff(const FamilyInstance& inst, unsigned long m, long precision);

// Exact valuation of a(m) for the lambda-free families (Legendre's formula);
// nullopt for pencils or when a(m) = 0.
std::optional<long> family_coeff_valuation(const FamilyInstance& inst, unsigned long m);

// Coefficient attached to tau^j/j (zero when j is off the stride pattern).
BigRational family_tau_coeff_exact(const FamilyInstance& inst, unsigned long j);
PadicInt family_tau_coeff(const FamilyInstance& inst, unsigned long j, long precision);

// Independent oracle: the coefficient of (T_1...T_t)^m in F^m for quartic
// hypersurfaces, or of (T_1 T_2 T_3)^(2m) in B^m for double sextics, computed
// by constrained multinomial expansion.  Exact.  Jacobi quartic is
// unsupported (its logarithm comes from an elliptic fibration).
BigRational multinomial_oracle(const FamilyInstance& inst, unsigned long m);

// The limit hypergeometric series of the family (the Dwork ratio numerator):
// 3F2(1/4,2/4,3/4;1,1;x) for quartics, 3F2(1/6,3/6,5/6;1,1;x) for sextics,
// 2F1(1/4,1/4;1;x) for the Jacobi quartic, 6F5 / 12F11 for the quasi-diagonal
// families.
HGParams family_limit_series(FamilyId id);

// First `count` coefficients of the limit series, exact.
std::vector<BigRational> limit_series_coeffs(FamilyId id, unsigned long count);

// Hypergeometric form of A_m / B_m for the quasi-diagonal families: the
// terminating pFq with upper {(-m+i)/12} (resp. /15) and the matching lower
// lists.  Returns the params; the series argument is 1/(arg_constant *
// lambda^12) resp. ^15.
HGParams quasi_pfq_params(FamilyId id, unsigned long m);
BigInt quasi_arg_constant(FamilyId id); // 2^10*3^6 or 4^4*5^5*6^6

} // namespace k3fg
