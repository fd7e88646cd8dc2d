#include "mfring/charzero.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <cstdio>
#include <cstdlib>

namespace mfring {

// ---------------------------------------------------------------------------
// counting formulas
// ---------------------------------------------------------------------------

long epsilon2(long N) {
    if (N < 1)
        throw PreconditionError("epsilon2: N must be positive");
    if (N % 4 == 0)
        return 0;
    long e = 1;
    for (const auto& [p, a] : factor(N).factors)
        if (p != 2)
            e *= 1 + kronecker(-1, p);
    return e;
}

long epsilon3(long N) {
    if (N < 1)
        throw PreconditionError("epsilon3: N must be positive");
    if (N % 9 == 0)
        return 0;
    long e = 1;
    for (const auto& [p, a] : factor(N).factors)
        if (p != 3)
            e *= 1 + kronecker(-3, p);
    return e;
}

long cusp_count(long N) {
    if (N < 1)
        throw PreconditionError("cusp_count: N must be positive");
    long e = 0;
    for (long d : divisors(N))
        e += euler_phi(gcd_long(d, N / d));
    return e;
}

CurveInvariants curve_invariants(long N) {
    CurveInvariants ci;
    ci.N = N;
    ci.psi = dedekind_psi(N);
    ci.eps2 = epsilon2(N);
    ci.eps3 = epsilon3(N);
    ci.cusps = cusp_count(N);
    // 12(g - 1) = psi - 3 eps2 - 4 eps3 - 6 eps_inf must be divisible by 12
    const long twelve_g_minus_12 = ci.psi - 3 * ci.eps2 - 4 * ci.eps3 - 6 * ci.cusps;
    if (twelve_g_minus_12 % 12 != 0)
        throw InvariantError("curve_invariants: genus formula non-integral at N=" +
                             std::to_string(N));
    ci.genus = 1 + twelve_g_minus_12 / 12;
    if (ci.genus < 0)
        throw InvariantError("curve_invariants: negative genus at N=" +
                             std::to_string(N));
    return ci;
}

long genus_X0(long N) { return curve_invariants(N).genus; }

long genus_X_full(long ell) {
    if (ell < 7 || !is_prime(ell))
        throw PreconditionError("genus_X_full: ell must be a prime >= 7");
    // g = 1 + |PSL_2(F_ell)| (ell - 6) / (12 ell), |PSL_2| = ell(ell^2-1)/2
    const long order = ell * (ell * ell - 1) / 2;
    const long num = order * (ell - 6);
    if (num % (12 * ell) != 0)
        throw InvariantError("genus_X_full: non-integral genus");
    return 1 + num / (12 * ell);
}

long dimension_M(long N, int k) {
    if (N < 1)
        throw PreconditionError("dimension_M: N must be positive");
    if (k < 0)
        throw PreconditionError("dimension_M: negative weight");
    if (k % 2 != 0)
        throw PreconditionError("dimension_M: odd weight out of scope at level " +
                                std::to_string(N));
    if (k == 0)
        return 1;
    if (N == 1) {
        if (k == 2)
            return 0;
        return (k % 12 == 2) ? k / 12 : k / 12 + 1;
    }
    const CurveInvariants ci = curve_invariants(N);
    if (k == 2)
        return ci.genus + ci.cusps - 1;
    return (k - 1) * (ci.genus - 1) + (k / 4) * ci.eps2 + (k / 3) * ci.eps3 +
           (k / 2) * ci.cusps;
}

// ---------------------------------------------------------------------------
// small rational linear algebra
// ---------------------------------------------------------------------------

QSeriesQ make_primitive(const QSeriesQ& f) {
    Integer den_lcm(1), num_gcd(0);
    for (const auto& c : f.a) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    if (num_gcd == 0)
        return f; // zero series
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    QSeriesQ g = series_scale(f, scale);
    const long lead = g.leading_exponent();
    if (lead >= 0 && g.a[lead] < 0)
        g = series_scale(g, Rational(-1));
    return g;
}

std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    // Gaussian elimination to reduced row-echelon form.
    std::vector<std::vector<Rational>> m;
    for (const auto& r : rows) {
        if (r.size() != cols)
            throw PreconditionError("rational_nullspace: ragged matrix");
        m.push_back(r);
    }
    std::vector<long> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t sel = rank;
        while (sel < m.size() && m[sel][col] == 0)
            ++sel;
        if (sel == m.size())
            continue;
        std::swap(m[rank], m[sel]);
        const Rational inv = Rational(1) / m[rank][col];
        for (std::size_t j = col; j < cols; ++j)
            m[rank][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == rank || m[i][col] == 0)
                continue;
            const Rational c = m[i][col];
            for (std::size_t j = col; j < cols; ++j)
                m[i][j] -= c * m[rank][j];
        }
        pivot_col.push_back(static_cast<long>(col));
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (long c : pivot_col)
        is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<Rational>> kernel;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < rank; ++i)
            v[static_cast<std::size_t>(pivot_col[i])] = -m[i][free];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// ---------------------------------------------------------------------------
// basis construction
// ---------------------------------------------------------------------------

QSeriesQ ladder_form(long d, long prec) {
    if (d < 2)
        throw PreconditionError("ladder_form: d must be >= 2");
    const QSeriesQ e2 = eisenstein(2, prec);
    return series_sub(e2, series_scale(v_operator(e2, d), Rational(d)));
}

namespace {

// A form that can be regenerated at any precision, with its widest
// evaluation cached.  Hecke images need their source at ell times the
// requested precision, so pool entries must be regenerable, not frozen.
class LazyForm {
    struct State {
        std::function<QSeriesQ(long)> make;
        std::optional<QSeriesQ> cached;
    };
    std::shared_ptr<State> s_;

public:
    // Evaluating this form at precision p touches its sources at p * mult:
    // each Hecke operator T_ell multiplies the requirement by ell.  The
    // closure uses this to skip images whose regeneration would explode.
    long mult = 1;

    // True when every Hecke image of this form already lies in the span the
    // form came from: T_ell commutes with V_d and with the inclusion of a
    // lower level (ell coprime to the level), so images of dilated full
    // lower-level bases and of Eisenstein/ladder eigenforms are redundant
    // as closure sources.
    bool hecke_redundant = false;

    explicit LazyForm(std::function<QSeriesQ(long)> make)
        : s_(std::make_shared<State>(State{std::move(make), std::nullopt})) {}

    QSeriesQ at(long prec) const {
        if (!s_->cached || s_->cached->prec() < prec)
            s_->cached = s_->make(prec);
        return series_truncate(*s_->cached, prec);
    }
};

// V_d image at full target precision: coefficients of V_d(g) at exponents
// n*d <= p only need g up to p/d, so basis-derived dilation seeds must not
// drag their source space to the full precision (Hecke closure multiplies
// the request by ell, and the source space rebuild is expensive).
QSeriesQ v_extend(const QSeriesQ& g, long d, long p) {
    if (g.prec() * d + d - 1 < p)
        throw PreconditionError("v_extend: source too short");
    QSeriesQ h(p);
    for (long n = 0; n * d <= p; ++n)
        h.a[n * d] = g.a[n];
    return h;
}

LazyForm hecke_image(const LazyForm& f, long ell, int k, long N) {
    LazyForm g([=](long prec) { return hecke(f.at(prec * ell + ell), ell, k, N); });
    g.mult = f.mult * ell;
    return g;
}

std::vector<long> hecke_primes(long N, int count) {
    std::vector<long> out;
    for (long ell = 2; static_cast<int>(out.size()) < count; ++ell)
        if (is_prime(ell) && N % ell != 0)
            out.push_back(ell);
    return out;
}

// Enumerate holomorphic eta quotients of the given weight and level with
// exponents bounded by |r_d| <= 16, in lexicographic exponent order.
void enumerate_eta_quotients(long N, int k, long prec, std::vector<LazyForm>& out) {
    const std::vector<long> ds = divisors(N);
    const long m = static_cast<long>(ds.size());
    if (m < 2)
        return;
    // The search space is (2*bound+1)^(m-1); shrink the per-exponent bound
    // as the divisor count grows to keep the enumeration near a million.
    long bound = 16;
    while (bound > 1) {
        double size = 1.0;
        for (long i = 0; i < m - 1; ++i)
            size *= 2.0 * bound + 1.0;
        if (size <= 2e6)
            break;
        --bound;
    }
    std::map<long, long> r;
    std::function<void(long, long)> rec = [&](long idx, long sum) {
        if (idx == m - 1) {
            const long last = 2L * k - sum;
            if (last < -bound || last > bound)
                return;
            r[ds[idx]] = last;
            if (eta_quotient_is_valid(N, r)) {
                std::map<long, long> rc = r;
                out.emplace_back([N, rc](long p) { return eta_quotient(N, rc, p); });
            }
            return;
        }
        for (long e = -bound; e <= bound; ++e) {
            r[ds[idx]] = e;
            rec(idx + 1, sum + e);
        }
    };
    rec(0, 0);
}

SpaceBasis finish_basis(long N, int k, long t, const EchelonBasisQ& span,
                        SpaceBasis::Provenance prov) {
    const long dim = dimension_M(N, k);
    if (span.rank() != dim)
        throw Error("build_basis: pool spans rank " + std::to_string(span.rank()) +
                    " of " + std::to_string(dim) + " for (N,k)=(" + std::to_string(N) +
                    "," + std::to_string(k) + ")");
    SpaceBasis b;
    b.N = N;
    b.k = k;
    b.t = t;
    b.provenance = prov;
    for (const auto& row : span.rows)
        b.forms.push_back(make_primitive(row));
    return b;
}

// Forward declaration: pools recurse into lower weights and levels.
std::vector<LazyForm> basis_lazy(long N, int k, long t);

// Pool seeds of M_k(Gamma_0(N)) assembled without assuming the span is
// complete.  `avoid` suppresses recursion into a level whose basis is being
// bootstrapped through this pool (the auxiliary-level fallback).
std::vector<LazyForm> seed_pool(long N, int k, long t, long avoid = 0);

std::vector<LazyForm> seed_pool(long N, int k, long t, long avoid) {
    std::vector<LazyForm> pool;
    const std::vector<long> ds = divisors(N);
    std::vector<long> proper; // divisors > 1
    for (long d : ds)
        if (d > 1)
            proper.push_back(d);

    auto add_redundant = [&pool](std::function<QSeriesQ(long)> make) {
        LazyForm f(std::move(make));
        f.hecke_redundant = true;
        pool.push_back(std::move(f));
    };

    if (k == 2) {
        for (long d : proper)
            add_redundant([d](long p) { return ladder_form(d, p); });
        for (long M : ds) {
            if (M == 1 || M == N || M == avoid)
                continue;
            try {
                for (const auto& f : basis_lazy(M, 2, t))
                    for (long d : divisors(N / M))
                        if (d > 1)
                            add_redundant([f, d](long p) {
                                return v_extend(f.at(p / d + 1), d, p);
                            });
            } catch (const Error&) {
                // lower-level space unavailable; the pool just loses seeds
            }
        }
        enumerate_eta_quotients(N, k, t, pool);
        return pool;
    }

    // k >= 4: Eisenstein dilations (Hecke eigenforms, so closure-redundant)
    add_redundant([k](long p) { return eisenstein(k, p); });
    for (long d : proper)
        add_redundant([k, d](long p) { return v_operator(eisenstein(k, p), d); });
    // ladder products of weight k
    {
        std::vector<std::vector<long>> tuples;
        std::vector<long> cur;
        std::function<void(std::size_t, int)> pick = [&](std::size_t from, int left) {
            if (left == 0) {
                tuples.push_back(cur);
                return;
            }
            for (std::size_t i = from; i < proper.size(); ++i) {
                cur.push_back(proper[i]);
                pick(i, left - 1);
                cur.pop_back();
            }
        };
        pick(0, k / 2);
        for (const auto& tup : tuples)
            pool.emplace_back([tup](long p) {
                QSeriesQ f = ladder_form(tup[0], p);
                for (std::size_t i = 1; i < tup.size(); ++i)
                    f = series_mul(f, ladder_form(tup[i], p));
                return f;
            });
    }
    // Serre derivatives of weight k-2 forms: ladders when k = 4 (the full
    // weight-2 basis would recurse through weight 4 at composite levels),
    // the whole lower basis otherwise
    if (k == 4) {
        for (long d : proper)
            pool.emplace_back([d](long p) {
                return serre_derivative(ladder_form(d, p), 2);
            });
    } else {
        try {
            for (const auto& f : basis_lazy(N, k - 2, t))
                pool.emplace_back([f, k](long p) {
                    return serre_derivative(f.at(p), k - 2);
                });
        } catch (const Error&) {
        }
    }
    // V_d images of the same weight at lower levels.  The whole lower basis
    // is inserted, and T_ell commutes with both V_d and the inclusion, so
    // these seeds never produce anything new under the Hecke closure.
    for (long M : ds) {
        if (M == N || M == avoid)
            continue;
        try {
            for (const auto& f : basis_lazy(M, k, t))
                for (long d : divisors(N / M))
                    add_redundant([f, d](long p) {
                        return d == 1 ? f.at(p) : v_extend(f.at(p / d + 1), d, p);
                    });
        } catch (const Error&) {
        }
    }
    enumerate_eta_quotients(N, k, t, pool);
    // products of lower-weight bases of the same level (k >= 6 only, to
    // avoid the weight-2 <-> weight-4 construction cycle); weight-2 factors
    // are represented by the ladders alone, since a full weight-2 basis is
    // itself derived from weight 4 and would force a high-precision rebuild
    if (N > 1 && k >= 6) {
        try {
            const auto blow = basis_lazy(N, k - 2, t);
            for (long d : divisors(N))
                if (d > 1)
                    for (const auto& f : blow)
                        pool.emplace_back([f, d](long p) {
                            return series_mul(f.at(p), ladder_form(d, p));
                        });
        } catch (const Error&) {
        }
        for (int k1 = 4; k1 <= k / 2; k1 += 2) {
            const int k2 = k - k1;
            try {
                const auto b1 = basis_lazy(N, k1, t);
                const auto b2 = basis_lazy(N, k2, t);
                for (const auto& f : b1)
                    for (const auto& g : b2)
                        pool.emplace_back([f, g](long p) {
                            return series_mul(f.at(p), g.at(p));
                        });
            } catch (const Error&) {
            }
        }
    }
    return pool;
}

// Insert seeds, then close under Hecke operators breadth-first until the
// span reaches the target dimension.
void fill_span(long N, int k, long t, long dim, const std::vector<LazyForm>& seeds,
               EchelonBasisQ& span, std::vector<LazyForm>& accepted) {
    auto try_add = [&](const LazyForm& f) {
        if (span.rank() >= dim)
            return;
        if (span.insert(f.at(t)))
            accepted.push_back(f);
    };
    for (const auto& f : seeds)
        try_add(f);
    if (std::getenv("MFRING_DEBUG_POOL"))
        std::fprintf(stderr, "pool (%ld,%d)@%ld: seeds %zu give rank %ld of %ld\n", N,
                     k, t, seeds.size(), span.rank(), dim);
    // Smallest prime first: a Hecke image needs its source at ell times the
    // target precision, and seed evaluation cost grows quadratically with
    // precision, so the cheap operators are tried exhaustively before the
    // expensive ones.
    std::vector<long> primes = hecke_primes(N, 4);
    std::sort(primes.begin(), primes.end());
    // Nested images compound the source-precision multiplier, and every
    // factor squares the evaluation cost; images past the cap are skipped.
    const long mult_cap = 12;
    std::size_t next = 0;
    for (long ell : primes) {
        for (std::size_t i = 0; i < accepted.size(); ++i) {
            if (span.rank() >= dim)
                return;
            if (accepted[i].hecke_redundant || accepted[i].mult * ell > mult_cap)
                continue;
            try_add(hecke_image(accepted[i], ell, k, N));
        }
    }
    long budget = 600;
    while (span.rank() < dim && next < accepted.size() && budget > 0) {
        const LazyForm f = accepted[next++];
        if (f.hecke_redundant)
            continue;
        for (long ell : primes) {
            if (span.rank() >= dim || budget <= 0)
                break;
            if (f.mult * ell > mult_cap)
                continue;
            --budget;
            try_add(hecke_image(f, ell, k, N));
        }
    }
}

// Fallback for weight >= 4 when the direct pool stalls: inside
// M_k(Gamma_0(qN)), the forms supported on exponents divisible by q are
// exactly the V_q-images of M_k(Gamma_0(N)).  The auxiliary pool span is
// always contained in M_k(Gamma_0(qN)), so undilating its q-supported
// subspace only ever produces genuine level-N forms; reaching the level-N
// dimension certifies completeness.
void lift_from_auxiliary_level(long N, int k, long t, long dim, EchelonBasisQ& span) {
    for (long q : hecke_primes(N, 3)) {
        if (span.rank() >= dim)
            return;
        const long aux = q * N;
        const long taux = q * t;
        EchelonBasisQ s;
        std::vector<LazyForm> accepted;
        fill_span(aux, k, taux, dimension_M(aux, k), seed_pool(aux, k, taux, N), s,
                  accepted);
        if (std::getenv("MFRING_DEBUG_POOL"))
            std::fprintf(stderr, "aux level %ld weight %d: rank %ld of %ld\n", aux, k,
                         s.rank(), dimension_M(aux, k));
        // kernel of the coefficient rows at exponents not divisible by q
        std::vector<std::vector<Rational>> constraints;
        for (long n = 1; n <= taux; ++n) {
            if (n % q == 0)
                continue;
            std::vector<Rational> row(s.rows.size());
            bool nonzero = false;
            for (std::size_t i = 0; i < s.rows.size(); ++i) {
                row[i] = s.rows[i].a[n];
                nonzero = nonzero || row[i] != 0;
            }
            if (nonzero)
                constraints.push_back(std::move(row));
        }
        for (const auto& v : rational_nullspace(constraints, s.rows.size())) {
            if (span.rank() >= dim)
                break;
            QSeriesQ g(taux);
            for (std::size_t i = 0; i < s.rows.size(); ++i)
                if (v[i] != 0)
                    g = series_add(g, series_scale(s.rows[i], v[i]));
            const auto h = undilate(g, q);
            if (!h)
                throw InvariantError("build_basis: auxiliary lift lost q-support");
            span.insert(*h);
        }
    }
}

// Weight-2 spaces at composite level via division: candidates g = b / L_N
// with b running over M_4, intersected with L_d^{-1} M_4 for the other
// ladders.  The ladders can share zeros, so the intersection may still
// contain meromorphic solutions; those are cut away by passing to the
// maximal T_ell-stable subspace (ell = smallest prime not dividing N).
// M_2 lies inside every stage (it is Hecke-stable), so rank == dim at the
// end certifies equality.
SpaceBasis weight2_by_division(long N, long t, EchelonBasisQ& span) {
    const long dim = dimension_M(N, 2);
    std::vector<long> others;
    for (long d : divisors(N))
        if (d > 1 && d < N)
            others.push_back(d);
    if (others.size() < 2)
        throw Error("build_basis: weight-2 pool insufficient at N=" + std::to_string(N));
    const long ell = hecke_primes(N, 1)[0];
    const long tw = ell * t; // headroom for the T_ell membership tests
    const SpaceBasis b4 = get_basis(N, 4, tw);
    EchelonBasisQ span4;
    for (const auto& f : b4.forms)
        span4.insert(f);
    const QSeriesQ Linv = series_inverse(ladder_form(N, tw));
    std::vector<QSeriesQ> cand;
    for (const auto& f : b4.forms)
        cand.push_back(series_mul(f, Linv));
    std::vector<std::vector<Rational>> constraints;
    for (long d : others) {
        const QSeriesQ Ld = ladder_form(d, tw);
        std::vector<QSeriesQ> residuals;
        for (const auto& g : cand)
            residuals.push_back(span4.reduce(series_mul(g, Ld)));
        for (long n = 0; n <= tw; ++n) {
            std::vector<Rational> row(cand.size());
            bool nonzero = false;
            for (std::size_t j = 0; j < cand.size(); ++j) {
                row[j] = residuals[j].a[n];
                nonzero = nonzero || row[j] != 0;
            }
            if (nonzero)
                constraints.push_back(std::move(row));
        }
    }
    std::vector<QSeriesQ> W;
    for (const auto& v : rational_nullspace(constraints, cand.size())) {
        QSeriesQ g(tw);
        for (std::size_t j = 0; j < cand.size(); ++j)
            if (v[j] != 0)
                g = series_add(g, series_scale(cand[j], v[j]));
        W.push_back(std::move(g));
    }
    // Hecke-stability refinement: W <- { f in W : T_ell f in span(W) }, the
    // membership tested at precision tw/ell.  Combinations keep precision
    // tw, so the iterations do not compound any precision loss.
    int guard = 16;
    while (static_cast<long>(W.size()) > dim && guard-- > 0) {
        const long tc = tw / ell;
        EchelonBasisQ EW;
        for (const auto& w : W)
            EW.insert(series_truncate(w, tc));
        std::vector<QSeriesQ> residuals;
        for (const auto& w : W)
            residuals.push_back(EW.reduce(hecke(w, ell, 2, N)));
        std::vector<std::vector<Rational>> rows;
        for (long n = 0; n <= tc; ++n) {
            std::vector<Rational> row(W.size());
            bool nonzero = false;
            for (std::size_t j = 0; j < W.size(); ++j) {
                row[j] = residuals[j].a[n];
                nonzero = nonzero || row[j] != 0;
            }
            if (nonzero)
                rows.push_back(std::move(row));
        }
        const auto kernel = rational_nullspace(rows, W.size());
        if (kernel.size() == W.size())
            break; // stable but still too big: certification below fails
        std::vector<QSeriesQ> next;
        for (const auto& v : kernel) {
            QSeriesQ g(tw);
            for (std::size_t j = 0; j < W.size(); ++j)
                if (v[j] != 0)
                    g = series_add(g, series_scale(W[j], v[j]));
            next.push_back(std::move(g));
        }
        W = std::move(next);
    }
    if (static_cast<long>(W.size()) != dim)
        throw InvariantError("build_basis: weight-2 division space has dimension " +
                             std::to_string(W.size()) + ", expected " +
                             std::to_string(dim) + " at N=" + std::to_string(N));
    for (const auto& g : W)
        span.insert(series_truncate(g, t));
    return finish_basis(N, 2, t, span, SpaceBasis::Provenance::generated);
}

// cache of built bases keyed by (N, k), each stored at its widest precision
std::map<std::pair<long, int>, SpaceBasis>& basis_cache() {
    static std::map<std::pair<long, int>, SpaceBasis> cache;
    return cache;
}

std::vector<LazyForm> basis_lazy(long N, int k, long t) {
    // The echelonized basis rows of a fixed space are determined by the
    // space itself once the precision passes the Sturm bound, so the i-th
    // row is a well-defined form at every precision and can be regenerated
    // by rebuilding the basis wider.
    std::vector<LazyForm> out;
    const std::size_t count = get_basis(N, k, t).forms.size();
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back([N, k, i](long prec) {
            const SpaceBasis b = get_basis(N, k, prec);
            if (i >= b.forms.size())
                throw InvariantError("basis_lazy: basis shrank on rebuild");
            return b.forms[i];
        });
    return out;
}

std::string g_fixture_dir;

} // namespace

void set_fixture_directory(const std::string& dir) { g_fixture_dir = dir; }
const std::string& fixture_directory() { return g_fixture_dir; }

SpaceBasis build_basis(long N, int k, long t) {
    if (N < 1 || k < 0 || k % 2 != 0)
        throw PreconditionError("build_basis: need N >= 1 and even k >= 0");
    if (t < sturm_bound(k, N))
        throw PreconditionError("build_basis: precision below the Sturm bound");
    const long dim = dimension_M(N, k);
    EchelonBasisQ span;
    if (k == 0) {
        span.insert(qq_one(t));
        return finish_basis(N, k, t, span, SpaceBasis::Provenance::generated);
    }
    if (N == 1) {
        // monomials in E4, E6, Delta of total weight k
        const QSeriesQ e4 = eisenstein(4, t), e6 = eisenstein(6, t);
        const QSeriesQ dl = delta_series(t);
        for (int c = 0; 12 * c <= k; ++c)
            for (int a = 0; 4 * a + 12 * c <= k; ++a) {
                const int rem = k - 4 * a - 12 * c;
                if (rem % 6 != 0)
                    continue;
                const int b = rem / 6;
                QSeriesQ f = series_mul(series_pow(e4, a), series_pow(e6, b));
                f = series_mul(f, series_pow(dl, c));
                span.insert(f);
            }
        return finish_basis(N, k, t, span, SpaceBasis::Provenance::generated);
    }
    std::vector<LazyForm> accepted;
    fill_span(N, k, t, dim, seed_pool(N, k, t), span, accepted);
    if (span.rank() == dim)
        return finish_basis(N, k, t, span, SpaceBasis::Provenance::generated);
    if (k == 2)
        return weight2_by_division(N, t, span);
    lift_from_auxiliary_level(N, k, t, dim, span);
    return finish_basis(N, k, t, span, SpaceBasis::Provenance::generated);
}

SpaceBasis get_basis(long N, int k, long t) {
    auto& cache = basis_cache();
    const auto key = std::make_pair(N, k);
    auto it = cache.find(key);
    if (it == cache.end() || it->second.t < t) {
        // When a cached basis is outgrown, rebuild at double the old width
        // (at least): precision requests creep upward during Hecke closure,
        // and doubling keeps the number of full rebuilds logarithmic.
        const long tb = (it == cache.end()) ? t : std::max(t, 2 * it->second.t);
        SpaceBasis built;
        try {
            built = build_basis(N, k, tb);
        } catch (const PreconditionError&) {
            throw;
        } catch (const Error&) {
            if (g_fixture_dir.empty())
                throw;
            const std::string path = g_fixture_dir + "/basis_" + std::to_string(N) +
                                     "_" + std::to_string(k) + ".txt";
            built = load_fixture(path);
            if (built.N != N || built.k != k || built.t < t)
                throw FixtureError("fixture " + path + " does not cover (N,k,t)=(" +
                                   std::to_string(N) + "," + std::to_string(k) + "," +
                                   std::to_string(t) + ")");
        }
        it = cache.insert_or_assign(key, std::move(built)).first;
    }
    const SpaceBasis& stored = it->second;
    SpaceBasis out;
    out.N = stored.N;
    out.k = stored.k;
    out.t = t;
    out.provenance = stored.provenance;
    for (const auto& f : stored.forms)
        out.forms.push_back(series_truncate(f, t));
    return out;
}

SpaceBasis load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FixtureError("cannot open fixture file " + path);
    auto next_data_line = [&](std::string& line) {
        while (std::getline(in, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#')
                continue;
            return true;
        }
        return false;
    };
    std::string line;
    if (!next_data_line(line))
        throw FixtureError("fixture " + path + ": missing header");
    long N, t, count;
    int k;
    {
        std::istringstream hs(line);
        if (!(hs >> N >> k >> t >> count))
            throw FixtureError("fixture " + path + ": malformed header");
    }
    if (N < 1 || k < 0 || t < 0 || count < 0)
        throw FixtureError("fixture " + path + ": invalid header values");
    SpaceBasis b;
    b.N = N;
    b.k = k;
    b.t = t;
    b.provenance = SpaceBasis::Provenance::fixture;
    for (long i = 0; i < count; ++i) {
        if (!next_data_line(line))
            throw FixtureError("fixture " + path + ": expected " +
                               std::to_string(count) + " rows, got " + std::to_string(i));
        std::istringstream rs(line);
        QSeriesQ f(t);
        for (long n = 0; n <= t; ++n) {
            std::string tok;
            if (!(rs >> tok))
                throw FixtureError("fixture " + path + ": row " + std::to_string(i) +
                                   " has fewer than " + std::to_string(t + 1) +
                                   " coefficients");
            try {
                f.a[n] = Rational(tok);
                f.a[n].canonicalize();
            } catch (...) {
                throw FixtureError("fixture " + path + ": bad rational '" + tok + "'");
            }
        }
        std::string extra;
        if (rs >> extra)
            throw FixtureError("fixture " + path + ": row " + std::to_string(i) +
                               " has trailing data");
        b.forms.push_back(std::move(f));
    }
    // integrality at the small primes not dividing N
    for (long p : {2L, 3L}) {
        if (N % p == 0)
            continue;
        for (const auto& f : b.forms)
            for (const auto& c : f.a)
                if (mpz_divisible_ui_p(c.get_den().get_mpz_t(),
                                       static_cast<unsigned long>(p)))
                    throw FixtureError("fixture " + path + ": denominator divisible by " +
                                       std::to_string(p));
    }
    EchelonBasisQ span;
    for (const auto& f : b.forms)
        span.insert(f);
    if (span.rank() != dimension_M(N, k))
        throw FixtureError("fixture " + path + ": rank " + std::to_string(span.rank()) +
                           " does not match dimension " +
                           std::to_string(dimension_M(N, k)));
    return b;
}

} // namespace mfring
