#pragma once

// Characteristic-zero data for X_0(N): elliptic-point counts, cusp counts,
// genus and dimension formulas, and certified q-expansion bases of
// M_k(Gamma_0(N)) built from Eisenstein ladders, eta quotients, dilations
// and Hecke images, with a fixture fallback.

#include <optional>
#include <string>
#include <vector>

#include "mfring/qseries.hpp"

namespace mfring {

// Number of elliptic points of order 2 resp. 3 on X_0(N).
long epsilon2(long N);
long epsilon3(long N);

// Number of cusps of X_0(N): sum over d | N of phi(gcd(d, N/d)).
long cusp_count(long N);

// Genus of the coarse modular curve X_0(N).
long genus_X0(long N);

// Genus of the full-level curve X(ell), ell >= 7 prime:
// g = 1 + |PSL_2(F_ell)| (ell - 6) / (12 ell).
long genus_X_full(long ell);

struct CurveInvariants {
    long N = 1;
    long genus = 0;
    long cusps = 1;
    long eps2 = 1;
    long eps3 = 1;
    long psi = 1; // index [SL_2(Z) : Gamma_0(N)]
};

// All invariants at once; asserts the genus-formula integrality identity.
CurveInvariants curve_invariants(long N);

// dim M_k(Gamma_0(N); Q) for even k >= 0.
long dimension_M(long N, int k);

// A certified echelonized basis of M_k(Gamma_0(N)).  Rows are primitive
// integer-coefficient representatives (content 1), so they are p-integral
// for every prime p, with strictly increasing pivot exponents.
struct SpaceBasis {
    long N = 1;
    int k = 0;
    long t = 0; // precision
    std::vector<QSeriesQ> forms;
    enum class Provenance { generated, fixture } provenance = Provenance::generated;
};

// Weight-2 Eisenstein ladder form E_2(q) - d E_2(q^d), integer coefficients,
// constant term 1 - d.
QSeriesQ ladder_form(long d, long prec);

// Build a basis of M_k(Gamma_0(N)) to precision t.  Throws on rank
// deficiency (pool insufficient) or t below the Sturm bound.
SpaceBasis build_basis(long N, int k, long t);

// Parse a plain-text fixture basis and re-verify rank and integrality.
SpaceBasis load_fixture(const std::string& path);

// Optional directory searched for fixture files basis_<N>_<k>.txt when the
// generated pool falls short.  Empty string disables the fallback.
void set_fixture_directory(const std::string& dir);
const std::string& fixture_directory();

// Cached access: builds (or loads a fixture for) the basis at precision >= t
// and returns a copy truncated to t.
SpaceBasis get_basis(long N, int k, long t);

// Divide out the content and normalize the leading coefficient positive;
// returns an integer-coefficient series spanning the same line.
QSeriesQ make_primitive(const QSeriesQ& f);

// Right-nullspace basis of a dense rational matrix (rows x cols).
std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& rows, std::size_t cols);

} // namespace mfring
