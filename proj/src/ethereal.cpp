#include "mfring/ethereal.hpp"

#include "mfring/errors.hpp"
#include "mfring/modcurve.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

namespace mfring {

namespace {

// Kernel basis of the linear map given by `rows` (constraints) on `cols`
// variables over F_p; vectors have entries in [0, p).
std::vector<std::vector<long>> fp_nullspace(std::vector<std::vector<long>> rows,
                                            std::size_t cols, long p) {
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][c] % p == 0)
            ++sel;
        if (sel == rows.size())
            continue;
        std::swap(rows[r], rows[sel]);
        const long inv = mod_inverse(rows[r][c], p);
        for (std::size_t j = c; j < cols; ++j)
            rows[r][j] = rows[r][j] * inv % p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] % p == 0)
                continue;
            const long m = rows[i][c] % p;
            for (std::size_t j = c; j < cols; ++j)
                rows[i][j] = ((rows[i][j] - m * rows[r][j]) % p + p) % p;
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (long c : pivot_col)
        is_pivot[c] = true;
    std::vector<std::vector<long>> kernel;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c])
            continue;
        std::vector<long> v(cols, 0);
        v[c] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v[pivot_col[i]] = (p - rows[i][c] % p) % p;
        kernel.push_back(std::move(v));
    }
    return kernel;
}

// V_d image over F_p at the full target precision (the source only needs
// precision p/d).
QSeriesFp v_extend_fp(const QSeriesFp& g, long d, long prec) {
    if (g.prec() * d + d - 1 < prec)
        throw PreconditionError("v_extend_fp: source too short");
    QSeriesFp h(prec, g.p);
    for (long n = 0; n * d <= prec; ++n)
        h.a[n * d] = g.a[n];
    return h;
}

std::string weight_letter(int index) {
    static const char* letters[] = {"x", "y", "z", "u", "v", "w"};
    if (index < 6)
        return letters[index];
    return "g" + std::to_string(index + 1);
}

// Deterministic generator names: letters per weight when the ring is small,
// a single sequential family x_1..x_n otherwise (as large composite levels
// are usually printed).
void assign_names(std::vector<Generator>& gens) {
    if (gens.size() > 6) {
        for (std::size_t i = 0; i < gens.size(); ++i)
            gens[i].name = "x" + std::to_string(i + 1);
        return;
    }
    std::map<int, int> seen;
    for (auto& g : gens)
        g.name = weight_letter(seen[g.weight]++) + std::to_string(g.weight);
}

// All exponent vectors e over `weights` with sum e_i * weights[i] = w,
// lexicographically by position (earliest generator's exponent varies
// slowest, descending).
void enumerate_monomials(const std::vector<int>& weights, int w,
                         std::vector<std::vector<long>>& out) {
    std::vector<long> cur(weights.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        if (i == weights.size())
            return;
        for (long e = left / weights[i]; e >= 0; --e) {
            cur[i] = e;
            rec(i + 1, left - e * static_cast<int>(weights[i]));
        }
        cur[i] = 0;
    };
    rec(0, w);
}

QSeriesFp evaluate_monomial(const std::vector<Generator>& gens,
                            const std::vector<long>& expo, long t, long p) {
    QSeriesFp acc = fp_one(t, p);
    for (std::size_t i = 0; i < expo.size(); ++i)
        if (expo[i] > 0)
            acc = series_mul(acc, series_pow(series_truncate(gens[i].expansion, t),
                                             expo[i]));
    return acc;
}

} // namespace

std::string RingPresentation::relation_text(const Relation& rel) const {
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < rel.monomials.size(); ++i) {
        if (rel.coeffs[i] == 0)
            continue;
        if (!first)
            out += " + ";
        first = false;
        std::string term;
        if (rel.coeffs[i] != 1)
            term = std::to_string(rel.coeffs[i]);
        for (std::size_t j = 0; j < rel.monomials[i].size(); ++j) {
            if (rel.monomials[i][j] == 0)
                continue;
            if (!term.empty())
                term += "*";
            term += generators[j].name;
            if (rel.monomials[i][j] > 1)
                term += "^" + std::to_string(rel.monomials[i][j]);
        }
        out += term.empty() ? "1" : term;
    }
    return out.empty() ? "0" : out;
}

ReducedBasis reduce_basis(const SpaceBasis& basis, long p) {
    ReducedBasis out;
    std::vector<QSeriesQ> F = basis.forms;
    const std::size_t count = F.size();
    long guard = 64 * static_cast<long>(count) + 64;
    while (true) {
        std::vector<QSeriesFp> red;
        for (const auto& f : F)
            red.push_back(reduce_mod_p(f, p));
        if (count == 0) {
            out.span.p = p;
            return out;
        }
        // kernel of the reductions: coefficient constraints per exponent
        std::vector<std::vector<long>> rows;
        for (long n = 0; n <= red[0].prec(); ++n) {
            std::vector<long> row(count);
            bool nonzero = false;
            for (std::size_t i = 0; i < count; ++i) {
                row[i] = red[i].a[n];
                nonzero = nonzero || row[i] != 0;
            }
            if (nonzero)
                rows.push_back(std::move(row));
        }
        const auto kernel = fp_nullspace(std::move(rows), count, p);
        if (kernel.empty()) {
            EchelonBasisFp span;
            span.p = p;
            for (const auto& f : red)
                span.insert(f);
            if (span.rank() != static_cast<long>(count))
                throw InvariantError("reduce_basis: saturated reductions still dependent");
            out.span = std::move(span);
            return out;
        }
        if (--guard < 0)
            throw InvariantError("reduce_basis: p-saturation did not terminate");
        // divide the witnessing integral combination by p and reinsert
        const auto& v = kernel.front();
        QSeriesQ g(F[0].prec());
        std::size_t slot = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (v[i] != 0) {
                g = series_add(g, series_scale(F[i], Rational(v[i])));
                slot = i;
            }
        for (auto& c : g.a) {
            c /= p;
            c.canonicalize();
            if (c.get_den() != 1)
                throw InvariantError("reduce_basis: saturation combination not divisible by p");
        }
        F[slot] = std::move(g);
        ++out.saturation_steps;
    }
}

std::vector<FrobeniusCombination> find_frobenius_combinations(
    const EchelonBasisFp& span, long p, const EchelonBasisFp* known) {
    std::vector<FrobeniusCombination> out;
    if (span.rank() == 0)
        return out;
    const std::size_t count = span.rows.size();
    std::vector<std::vector<long>> rows;
    for (long n = 0; n <= span.prec; ++n) {
        if (n % p == 0)
            continue;
        std::vector<long> row(count);
        bool nonzero = false;
        for (std::size_t i = 0; i < count; ++i) {
            row[i] = span.rows[i].a[n];
            nonzero = nonzero || row[i] != 0;
        }
        if (nonzero)
            rows.push_back(std::move(row));
    }
    for (const auto& v : fp_nullspace(std::move(rows), count, p)) {
        QSeriesFp combo(span.prec, p);
        for (std::size_t i = 0; i < count; ++i)
            if (v[i] != 0)
                combo = series_add(combo, series_scale(span.rows[i], v[i]));
        const PthRootResult rooted = pth_root(combo);
        if (!rooted.root)
            throw InvariantError("find_frobenius_combinations: support-constrained combination has no root");
        FrobeniusCombination fc;
        fc.combination = v;
        fc.root = *rooted.root;
        if (known && known->rank() > 0)
            fc.rediscovery = known->contains(
                series_truncate(fc.root, std::min(fc.root.prec(), known->prec)));
        out.push_back(std::move(fc));
    }
    return out;
}

std::optional<std::vector<long>> verify_as_relation(const QSeriesFp& y,
                                                    const QSeriesFp& s,
                                                    const EchelonBasisFp& span,
                                                    long sturm) {
    const long p = y.p;
    QSeriesFp val = series_sub(series_pow(y, p),
                               series_mul(series_pow(s, p - 1), y));
    if (val.prec() < sturm || span.prec < sturm)
        throw PreconditionError("verify_as_relation: precision below the Sturm bound");
    return span.express(series_truncate(val, std::min(val.prec(), span.prec)));
}

namespace {

// Weight-2 generators: reductions of the characteristic-0 space first, then
// ethereal generators found by (1) p-th roots of Frobenius-supported
// combinations of the weight-2p reductions, (2) V_d pullbacks of ethereal
// generators of proper divisor levels, (3) Artin-Schreier solves.
std::vector<Generator> weight2_generators(long N, long p, long t, EchelonBasisFp& span2) {
    std::vector<Generator> gens;
    span2.p = p;
    if (dimension_M(N, 2) > 0) {
        const ReducedBasis red = reduce_basis(get_basis(N, 2, t), p);
        for (const auto& row : red.span.rows) {
            if (!span2.insert(series_truncate(row, t)))
                throw InvariantError("weight-2 reductions dependent after saturation");
            Generator g;
            g.weight = 2;
            g.expansion = series_truncate(row, t);
            g.ethereal = false;
            g.provenance = "reduction of char-0 form";
            gens.push_back(std::move(g));
        }
    }
    const long dim2 = dim_modp(N, p, 2);
    if (span2.rank() < dim2) {
        const ReducedBasis red2p = reduce_basis(get_basis(N, 2 * p, p * t), p);
        auto accept = [&](const QSeriesFp& root, const char* how) {
            if (span2.rank() >= dim2 || !span2.insert(root))
                return;
            Generator g;
            g.weight = 2;
            g.expansion = root;
            g.ethereal = true;
            g.provenance = std::string(how) + " of a weight-" +
                           std::to_string(2 * p) + " reduction";
            gens.push_back(std::move(g));
        };
        // Cuspidal p-th roots of single echelon rows first, in pivot order:
        // this is the canonical normalization (it reproduces oldform images
        // such as a dilated lower-level ethereal form whose p-th power is
        // itself a dilated reduction and hence an echelon row).
        for (const auto& row : red2p.span.rows) {
            const PthRootResult r = pth_root(row);
            if (!r.root)
                continue;
            const QSeriesFp root = series_truncate(*r.root, t);
            if (!root.is_zero() && root.leading_exponent() > 0)
                accept(root, "p-th root (single row)");
        }
        const auto combos = find_frobenius_combinations(red2p.span, p, &span2);
        // then cuspidal roots of general Frobenius-supported combinations
        for (const auto& fc : combos) {
            if (fc.rediscovery)
                continue;
            const QSeriesFp root = series_truncate(fc.root, t);
            if (!root.is_zero() && root.leading_exponent() > 0)
                accept(root, "p-th root (combination)");
        }
        // finally non-cuspidal roots (e.g. the Hasse line itself)
        for (const auto& fc : combos) {
            if (fc.rediscovery)
                continue;
            accept(series_truncate(fc.root, t), "p-th root (combination)");
        }
    }
    if (span2.rank() < dim2) {
        for (long M : divisors(N)) {
            if (M <= 1 || M == N || span2.rank() >= dim2)
                continue;
            EchelonBasisFp lower;
            const long d = N / M;
            const long tM = t / d + 1;
            for (const auto& g : weight2_generators(M, p, tM, lower)) {
                if (!g.ethereal)
                    continue;
                const QSeriesFp img = v_extend_fp(g.expansion, d, t);
                if (span2.rank() < dim2 && span2.insert(img)) {
                    Generator h;
                    h.weight = 2;
                    h.expansion = img;
                    h.ethereal = true;
                    h.provenance = "oldform V_" + std::to_string(d) +
                                   " image of level " + std::to_string(M);
                    gens.push_back(std::move(h));
                }
            }
        }
    }
    if (span2.rank() < dim2 && span2.rank() > 0 && span2.rank() <= 8) {
        // Artin-Schreier fill: y^p - s^(p-1) y = f with s over the current
        // span and f over the weight-2p reductions.
        const ReducedBasis red2p = reduce_basis(get_basis(N, 2 * p, p * t), p);
        const long combos = pow_long(p, static_cast<int>(span2.rank()));
        for (long code = 0; code < combos && span2.rank() < dim2; ++code) {
            QSeriesFp s(t, p);
            long c = code;
            for (const auto& row : span2.rows) {
                s = series_add(s, series_scale(series_truncate(row, t), c % p));
                c /= p;
            }
            for (const auto& f : red2p.span.rows) {
                if (span2.rank() >= dim2)
                    break;
                try {
                    const QSeriesFp y =
                        artin_schreier_solve(p, s, series_truncate(f, t), FpElement{0, p});
                    if (span2.insert(y)) {
                        Generator g;
                        g.weight = 2;
                        g.expansion = y;
                        g.ethereal = true;
                        g.provenance = "Artin-Schreier solve";
                        gens.push_back(std::move(g));
                    }
                } catch (const Error&) {
                }
            }
        }
    }
    if (span2.rank() != dim2)
        throw InvariantError("build_presentation: weight-2 mod-p space has rank " +
                             std::to_string(span2.rank()) + ", expected " +
                             std::to_string(dim2) + " at N=" + std::to_string(N));
    return gens;
}

} // namespace

RingPresentation build_presentation(long N, long p, int max_weight, long t) {
    if (p != 2 && p != 3)
        throw PreconditionError("build_presentation: characteristic must be 2 or 3");
    if (N < 1 || N % p == 0)
        throw PreconditionError("build_presentation: characteristic divides the level");
    if (max_weight < 4 || max_weight % 2 != 0)
        throw PreconditionError("build_presentation: max weight must be even and at least 4");
    if (t < sturm_bound(max_weight, N))
        throw PreconditionError("build_presentation: precision below the Sturm bound of the top weight");
    RingPresentation R;
    R.N = N;
    R.p = p;
    EchelonBasisFp span2;
    R.generators = weight2_generators(N, p, t, span2);
    R.dimension_table.emplace_back(2, dim_modp(N, p, 2));

    // Minimal-relation bookkeeping: vectors over the weight-w monomial
    // index, spanned by monomial multiples of lower-weight relations.
    for (int w = 4; w <= max_weight; w += 2) {
        const long dimw = dim_modp(N, p, w);
        std::vector<int> weights;
        for (const auto& g : R.generators)
            weights.push_back(g.weight);
        std::vector<std::vector<long>> monos;
        enumerate_monomials(weights, w, monos);
        std::vector<QSeriesFp> mono_series;
        EchelonBasisFp spanw;
        spanw.p = p;
        for (const auto& expo : monos) {
            mono_series.push_back(evaluate_monomial(R.generators, expo, t, p));
            spanw.insert(mono_series.back());
        }
        // new generators: reduction rows outside the monomial span
        if (dimension_M(N, w) > 0 && spanw.rank() < dimw) {
            const ReducedBasis redw = reduce_basis(get_basis(N, w, t), p);
            for (const auto& row : redw.span.rows)
                if (spanw.rank() < dimw && spanw.insert(series_truncate(row, t))) {
                    Generator g;
                    g.weight = w;
                    g.expansion = series_truncate(row, t);
                    g.ethereal = false;
                    g.provenance = "reduction of char-0 form";
                    R.generators.push_back(std::move(g));
                }
        }
        if (spanw.rank() != dimw)
            throw InvariantError("build_presentation: weight-" + std::to_string(w) +
                                 " mod-p space has rank " + std::to_string(spanw.rank()) +
                                 ", expected " + std::to_string(dimw) + " at N=" +
                                 std::to_string(N));
        R.dimension_table.emplace_back(w, dimw);
        // relations: kernel of the monomial evaluation, minus monomial
        // multiples of lower-weight relations
        std::vector<std::vector<long>> rows;
        for (long n = 0; n <= t; ++n) {
            std::vector<long> row(monos.size());
            bool nonzero = false;
            for (std::size_t j = 0; j < monos.size(); ++j) {
                row[j] = mono_series[j].a[n];
                nonzero = nonzero || row[j] != 0;
            }
            if (nonzero)
                rows.push_back(std::move(row));
        }
        const auto kernel = fp_nullspace(std::move(rows), monos.size(), p);
        if (kernel.empty())
            continue;
        std::map<std::vector<long>, std::size_t> mono_index;
        for (std::size_t j = 0; j < monos.size(); ++j)
            mono_index[monos[j]] = j;
        // consequence span of lower relations
        std::vector<std::vector<long>> consequence_rows;
        for (const auto& rel : R.relations) {
            std::vector<std::vector<long>> factors;
            enumerate_monomials(weights, w - rel.weight, factors);
            for (const auto& m : factors) {
                std::vector<long> vec(monos.size(), 0);
                for (std::size_t i = 0; i < rel.monomials.size(); ++i) {
                    if (rel.coeffs[i] == 0)
                        continue;
                    std::vector<long> prod = rel.monomials[i];
                    prod.resize(weights.size(), 0);
                    for (std::size_t j = 0; j < prod.size(); ++j)
                        prod[j] += m[j];
                    vec[mono_index.at(prod)] =
                        (vec[mono_index.at(prod)] + rel.coeffs[i]) % p;
                }
                consequence_rows.push_back(std::move(vec));
            }
        }
        // echelonize consequences over the monomial coordinates, then keep
        // only kernel vectors outside their span
        auto reduce_against = [&](std::vector<long> v,
                                  const std::vector<std::vector<long>>& basis,
                                  const std::vector<long>& pivots) {
            for (std::size_t i = 0; i < basis.size(); ++i) {
                const long c = v[pivots[i]] % p;
                if (c == 0)
                    continue;
                for (std::size_t j = 0; j < v.size(); ++j)
                    v[j] = ((v[j] - c * basis[i][j]) % p + p) % p;
            }
            return v;
        };
        std::vector<std::vector<long>> basis;
        std::vector<long> pivots;
        auto insert_vec = [&](std::vector<long> v) {
            v = reduce_against(std::move(v), basis, pivots);
            std::size_t piv = 0;
            while (piv < v.size() && v[piv] % p == 0)
                ++piv;
            if (piv == v.size())
                return false;
            const long inv = mod_inverse(v[piv], p);
            for (auto& x : v)
                x = (x % p + p) % p * inv % p;
            basis.push_back(std::move(v));
            pivots.push_back(static_cast<long>(piv));
            return true;
        };
        for (auto& cr : consequence_rows)
            insert_vec(std::move(cr));
        for (const auto& kv : kernel) {
            std::vector<long> residual = reduce_against(kv, basis, pivots);
            bool zero = true;
            for (long x : residual)
                zero = zero && x % p == 0;
            if (zero)
                continue;
            Relation rel;
            rel.weight = w;
            rel.monomials = monos;
            rel.coeffs = kv;
            // certify: the relation evaluates to zero to full precision
            QSeriesFp check(t, p);
            for (std::size_t j = 0; j < monos.size(); ++j)
                if (kv[j] != 0)
                    check = series_add(check, series_scale(mono_series[j], kv[j]));
            if (!check.is_zero())
                throw InvariantError("build_presentation: kernel vector fails full-precision check");
            R.relations.push_back(std::move(rel));
            insert_vec(kv);
        }
    }
    assign_names(R.generators);
    return R;
}

RingPresentation build_presentation_level1_char2_full(int max_weight, long t) {
    if (max_weight < 1)
        throw PreconditionError("build_presentation_level1_char2_full: max weight must be positive");
    if (t < sturm_bound(std::max(12, max_weight), 1))
        throw PreconditionError("build_presentation_level1_char2_full: precision below the Sturm bound");
    RingPresentation R;
    R.N = 1;
    R.p = 2;
    Generator hasse;
    hasse.weight = 1;
    hasse.expansion = fp_one(t, 2);
    hasse.ethereal = true;
    hasse.provenance = "Hasse invariant";
    R.generators.push_back(std::move(hasse));
    if (max_weight >= 12) {
        Generator x12;
        x12.weight = 12;
        x12.expansion = reduce_mod_p(delta_series(t), 2);
        x12.ethereal = false;
        x12.provenance = "reduction of char-0 form";
        R.generators.push_back(std::move(x12));
    }
    for (auto& g : R.generators)
        g.name = "x" + std::to_string(g.weight);
    for (int k = 1; k <= max_weight; ++k)
        R.dimension_table.emplace_back(
            k, k % 2 == 0 ? dim_modp(1, 2, k) : dim_modp_odd_level1_char2(k));
    return R;
}

std::optional<OldformMatch> oldform_scan(const Generator& gen, long N, long p) {
    for (long M : divisors(N)) {
        if (M == N)
            continue;
        const long d = N / M;
        const long bound = d * sturm_bound(gen.weight, M);
        if (gen.expansion.prec() < bound)
            continue; // cannot certify at this precision
        std::vector<Generator> lower;
        if (M == 1) {
            if (gen.weight == 2) {
                // the level-1 weight-2 mod-p space is spanned by the
                // (square of the) Hasse invariant, with q-expansion 1
                Generator one;
                one.weight = 2;
                one.expansion = fp_one(bound / d + 1, p);
                one.name = "x2";
                lower.push_back(std::move(one));
            } else {
                continue;
            }
        } else {
            try {
                const long tM = std::max(sturm_bound(std::max(4, gen.weight), M) + 8,
                                         bound / d + 1);
                const RingPresentation PM =
                    build_presentation(M, p, std::max(4, gen.weight), tM);
                lower = PM.generators;
            } catch (const Error&) {
                continue;
            }
        }
        for (const auto& f : lower) {
            if (f.weight != gen.weight)
                continue;
            const QSeriesFp img = v_extend_fp(f.expansion, d, bound);
            if (series_truncate(gen.expansion, bound) == img)
                return OldformMatch{M, d, f.name};
        }
    }
    return std::nullopt;
}

} // namespace mfring
