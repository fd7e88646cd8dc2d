#pragma once

#include "mfring/charzero.hpp"
#include "mfring/stacky.hpp"

#include <string>
#include <vector>

namespace mfring {

// The stacky model of the rigidified modular curve of level N in
// characteristic p in {0, 2, 3} (p > 3 behaves like 0): coarse genus, cusp
// degree, and the multiset of stacky points with all wild jumps populated.
// Grading convention fixed here: modular weight k corresponds to the
// (k/2)-th power of the log canonical bundle.
struct StackyModel {
    long N = 1;
    long p = 0;
    long genus = 0;
    long delta = 0; // number of cusps
    std::vector<StackyPoint> points;
    bool jumps_derived = false; // wild jumps obtained by Euler-characteristic conservation

    Rational log_canonical_degree() const; // deg(K + Delta)
};

struct EtherealReport {
    bool exists = false;
    long weight2_count = 0;
    std::string criterion; // prime-factorization witness text
};

// Census of stacky points per characteristic; throws PreconditionError when
// p divides N or p is not in {0, 2, 3} (after mapping p > 3 to 0).
StackyModel stacky_model(long N, long p);

// Elliptic point counts on the char-p curve: p = 2 halves eps2, p = 3
// halves eps3.
std::pair<long, long> epsilon_prime(long N, long p);

// Canonical / log canonical divisor of the model as a QDivisor with
// stacky-point multiplicities (a point of order e and coefficient c is
// recorded with multiplicity c*e and degree 1/e).
QDivisor canonical_divisor(const StackyModel& model, bool log_version);

// (g; c_1..c_r; delta) of the model.
RefinedSignature refined_signature(const StackyModel& model);

// dim M_k of level N in characteristic p (even k >= 0; p = 0 delegates to
// the classical dimension).  Weight 2 uses g + delta - 1 + sum floor(c_i);
// weight >= 4 uses Riemann-Roch on floor((k/2)(K + Delta)).
long dim_modp(long N, long p, long k);

// Monomial count of the weight-graded ring k[x_1, x_12] of level 1 in
// characteristic 2, the only case with odd-weight forms in scope.
long dim_modp_odd_level1_char2(long k);

// Existence and count of weight-2 ethereal forms: every prime factor of N
// must be 1 mod 4 (p = 2) or 1 mod 3 (p = 3), and then there are 2^(r-1) of
// them.  The count is independently recomputed as
// dim_modp(N,p,2) - dim M_2(N; char 0) and the two must agree.
EtherealReport ethereal_report(long N, long p);

} // namespace mfring
