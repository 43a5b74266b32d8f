#include "specker/intlat.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace specker {

IntVector::IntVector(std::initializer_list<long> xs) {
    entries_.reserve(xs.size());
    for (long x : xs) entries_.emplace_back(x);
}

BigInt IntVector::sup_norm() const {
    BigInt m = 0;
    for (const auto& x : entries_) {
        BigInt a = abs(x);
        if (a > m) m = a;
    }
    return m;
}

bool IntVector::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return x == 0; });
}

std::strong_ordering operator<=>(const IntVector& a, const IntVector& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
    }
    return a.size() <=> b.size();
}

std::string IntVector::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
    os << ')';
    return os.str();
}

IntVector operator+(const IntVector& a, const IntVector& b) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

IntVector operator-(const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

IntVector operator*(const BigInt& s, const IntVector& v) {
    IntVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

bool norm_lex_less(const IntVector& a, const IntVector& b) {
    int c = cmp(a.sup_norm(), b.sup_norm());
    if (c != 0) return c < 0;
    return a < b;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw std::invalid_argument("IntMatrix: entry count does not match shape");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged rows");
        for (long x : r) entries_.emplace_back(x);
    }
}

IntVector IntMatrix::operator*(const IntVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("IntMatrix * IntVector: shape mismatch");
    IntVector r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        BigInt acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

bool IntMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return x == 0; });
}

BigInt IntMatrix::max_abs() const {
    BigInt m = 0;
    for (const auto& x : entries_)
        if (abs(x) > m) m = abs(x);
    return m;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

const IntVector& KernelBasis::shortest() const {
    if (basis.empty()) throw NoNonzeroKernel();
    const IntVector* best = &basis.front();
    for (const auto& b : basis)
        if (b.sup_norm() < best->sup_norm()) best = &b;
    return *best;
}

namespace {

// Column-wise unimodular reduction.  `cols` holds the columns of the matrix
// being reduced (each of length `rows`), `unimod` the matching columns of the
// accumulated transform.  On return the columns at index >= returned pivot
// count are zero, and the same columns of `unimod` span the integer kernel.
std::size_t column_reduce(std::vector<IntVector>& cols, std::vector<IntVector>& unimod,
                          std::size_t rows) {
    const std::size_t n = cols.size();
    std::size_t p = 0;
    BigInt g, x, y;
    for (std::size_t r = 0; r < rows && p < n; ++r) {
        for (std::size_t j = p + 1; j < n; ++j) {
            if (cols[j][r] == 0) continue;
            const BigInt a = cols[p][r];
            const BigInt b = cols[j][r];
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            const BigInt bg = b / g;
            const BigInt ag = a / g;
            auto combine = [&](std::vector<IntVector>& vs) {
                IntVector np = x * vs[p] + y * vs[j];
                IntVector nj = BigInt(-bg) * vs[p] + ag * vs[j];
                vs[p] = std::move(np);
                vs[j] = std::move(nj);
            };
            combine(cols);
            combine(unimod);
        }
        if (cols[p][r] != 0) ++p;
    }
    return p;
}

std::vector<IntVector> identity_columns(std::size_t n) {
    std::vector<IntVector> u(n, IntVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) u[i][j] = 0;
        u[i][i] = 1;
    }
    return u;
}

// Points offset + sum_i u_i * basis[i], u integer; basis independent.
struct AffineLattice {
    IntVector offset;
    std::vector<IntVector> basis;
};

// Intersection with the hyperplane x_coord = value.
std::optional<AffineLattice> restrict_coord(const AffineLattice& lat, std::size_t coord,
                                            const BigInt& value) {
    const std::size_t r = lat.basis.size();
    std::vector<IntVector> row(r, IntVector(1));
    bool any = false;
    for (std::size_t i = 0; i < r; ++i) {
        row[i][0] = lat.basis[i][coord];
        any = any || row[i][0] != 0;
    }
    if (!any) {
        if (lat.offset[coord] != value) return std::nullopt;
        return lat;
    }
    auto u = identity_columns(r);
    column_reduce(row, u, 1);
    const BigInt& g = row[0][0];
    const BigInt need = value - lat.offset[coord];
    if (need % g != 0) return std::nullopt;
    const BigInt z = need / g;

    auto image = [&](const IntVector& coeffs) {
        IntVector v(lat.offset.size());
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = 0;
        for (std::size_t i = 0; i < r; ++i)
            if (coeffs[i] != 0) v = v + coeffs[i] * lat.basis[i];
        return v;
    };
    AffineLattice out;
    out.offset = lat.offset + z * image(u[0]);
    for (std::size_t j = 1; j < r; ++j) out.basis.push_back(image(u[j]));
    return out;
}

// Lexicographically smallest point of the lattice inside [-t, t]^d.
std::optional<IntVector> lexmin_in_box(const AffineLattice& lat, const BigInt& t) {
    const std::size_t d = lat.offset.size();
    if (lat.basis.empty()) {
        if (lat.offset.sup_norm() > t) return std::nullopt;
        return lat.offset;
    }
    if (lat.basis.size() == 1) {
        const IntVector& w = lat.basis.front();
        std::optional<BigInt> lo, hi;
        std::optional<std::size_t> lead;
        for (std::size_t c = 0; c < d; ++c) {
            const BigInt& o = lat.offset[c];
            const BigInt& wc = w[c];
            if (wc == 0) {
                if (abs(o) > t) return std::nullopt;
                continue;
            }
            if (!lead) lead = c;
            BigInt l, h;
            if (wc > 0) {
                l = ceil_div(-t - o, wc);
                h = floor_div(t - o, wc);
            } else {
                l = ceil_div(t - o, wc);
                h = floor_div(-t - o, wc);
            }
            lo = lo ? big_max(*lo, l) : l;
            hi = hi ? big_min(*hi, h) : h;
        }
        if (*lo > *hi) return std::nullopt;
        const BigInt u = w[*lead] > 0 ? *lo : *hi;
        return lat.offset + u * w;
    }
    // Rank >= 2: fix the first non-constant coordinate to increasing values.
    std::size_t c = 0;
    BigInt g = 0;
    for (; c < d; ++c) {
        for (const auto& b : lat.basis) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b[c].get_mpz_t());
        if (g != 0) break;
        if (abs(lat.offset[c]) > t) return std::nullopt;
    }
    const BigInt& o = lat.offset[c];
    for (BigInt v = o + g * ceil_div(-t - o, g); v <= t; v += g) {
        auto sub = restrict_coord(lat, c, v);
        if (!sub) continue;
        if (auto r = lexmin_in_box(*sub, t)) return r;
    }
    return std::nullopt;
}

}  // namespace

KernelBasis kernel_basis(const IntMatrix& a) {
    const std::size_t n = a.cols();
    std::vector<IntVector> cols(n, IntVector(a.rows()));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) cols[j][i] = a(i, j);
    auto u = identity_columns(n);
    const std::size_t pivots = column_reduce(cols, u, a.rows());
    KernelBasis kb{a, {}};
    for (std::size_t j = pivots; j < n; ++j) {
        IntVector v = std::move(u[j]);
        // Normalize the sign: first nonzero entry positive.
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            if (v[i] < 0) v = -v;
            break;
        }
        kb.basis.push_back(std::move(v));
    }
    return kb;
}

IntVector min_solution(const IntMatrix& a, const BigInt& threshold) {
    return min_solution(kernel_basis(a), threshold);
}

IntVector min_solution(const KernelBasis& kb, const BigInt& threshold) {
    if (kb.basis.empty()) throw NoNonzeroKernel();
    const BigInt need = big_max(threshold, BigInt(1));
    if (kb.rank() == 1) {
        const IntVector& w = kb.basis.front();
        const BigInt q = ceil_div(need, w.sup_norm());
        IntVector pos = q * w;
        IntVector neg = -pos;
        return neg < pos ? neg : pos;
    }
    const std::size_t d = kb.matrix.cols();
    AffineLattice kernel{IntVector(d), kb.basis};
    for (std::size_t i = 0; i < d; ++i) kernel.offset[i] = 0;
    // A multiple of any basis vector reaches the threshold, so this terminates.
    for (BigInt t = need;; ++t) {
        std::optional<IntVector> best;
        for (std::size_t i = 0; i < d; ++i) {
            for (int sign : {-1, 1}) {
                auto face = restrict_coord(kernel, i, sign * t);
                if (!face) continue;
                auto v = lexmin_in_box(*face, t);
                if (v && (!best || *v < *best)) best = std::move(v);
            }
        }
        if (best) return *best;
    }
}

BigInt feasibility_box(const KernelBasis& kb, const BigInt& threshold) {
    const BigInt need = big_max(threshold, BigInt(1));
    const BigInt w = kb.shortest().sup_norm();
    return ceil_div(need, w) * w;
}

namespace {

bool fits_fast_path(const IntMatrix& a, const BigInt& box) {
    constexpr long limit = 1L << 20;
    if (box > limit) return false;
    return a.max_abs() <= limit && a.cols() <= 16;
}

}  // namespace

std::optional<IntVector> brute_min_solution(const IntMatrix& a, const BigInt& threshold,
                                            const BigInt& box) {
    const BigInt need = big_max(threshold, BigInt(1));
    if (fits_fast_path(a, box)) {
        const long t = need > box ? box.get_si() + 1 : need.get_si();
        const long ths[] = {t};
        return brute_min_solutions(a, ths, box.get_si()).front();
    }
    // Generic odometer over each norm shell; only practical for tiny boxes.
    const std::size_t d = a.cols();
    for (BigInt t = need; t <= box; ++t) {
        IntVector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = -t;
        while (true) {
            if (v.sup_norm() == t && (a * v).is_zero()) return v;
            std::size_t i = d;
            while (i > 0 && v[i - 1] == t) v[--i] = -t;
            if (i == 0) break;
            ++v[i - 1];
        }
    }
    return std::nullopt;
}

std::vector<std::optional<IntVector>> brute_min_solutions(const IntMatrix& a,
                                                          std::span<const long> thresholds,
                                                          long box) {
    if (!fits_fast_path(a, BigInt(box)))
        throw std::out_of_range("brute_min_solutions: entries or box too large for fast path");
    const std::size_t d = a.cols();
    const std::size_t m = a.rows();
    std::vector<long> coef(m * d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) coef[i * d + j] = a(i, j).get_si();

    std::vector<std::optional<IntVector>> out(thresholds.size());
    std::vector<long> need(thresholds.size());
    std::size_t open = 0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        need[i] = std::max(thresholds[i], 1L);
        if (need[i] <= box) ++open;
    }
    if (open == 0) return out;
    long lowest = box + 1;
    for (long n : need) lowest = std::min(lowest, n);

    auto record = [&](const std::vector<long>& v, long t) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i] || need[i] > t) continue;
            std::vector<BigInt> e(v.begin(), v.end());
            out[i] = IntVector(std::move(e));
            --open;
        }
    };

    std::vector<long> v(d), resid(m);
    const std::size_t free_dims = d - 1;
    for (long t = lowest; t <= box && open > 0; ++t) {
        // Odometer over the first d-1 coordinates in lexicographic order; the
        // last coordinate is resolved from the equations.
        for (std::size_t i = 0; i < free_dims; ++i) v[i] = -t;
        while (true) {
            long pmax = 0;
            for (std::size_t i = 0; i < free_dims; ++i) pmax = std::max(pmax, std::labs(v[i]));
            for (std::size_t r = 0; r < m; ++r) {
                long s = 0;
                for (std::size_t j = 0; j < free_dims; ++j) s += coef[r * d + j] * v[j];
                resid[r] = s;
            }
            bool consistent = true;
            std::optional<long> forced;
            for (std::size_t r = 0; r < m && consistent; ++r) {
                const long c = coef[r * d + free_dims];
                if (c == 0) {
                    consistent = resid[r] == 0;
                } else if (resid[r] % c != 0) {
                    consistent = false;
                } else {
                    const long x = -resid[r] / c;
                    if (forced && *forced != x) consistent = false;
                    forced = x;
                }
            }
            if (consistent) {
                auto admissible = [&](long x) {
                    return pmax == t ? std::labs(x) <= t : std::labs(x) == t;
                };
                if (forced) {
                    if (admissible(*forced)) {
                        v[free_dims] = *forced;
                        record(v, t);
                    }
                } else {
                    for (long x = -t; x <= t && open > 0; ++x) {
                        if (!admissible(x)) continue;
                        v[free_dims] = x;
                        record(v, t);
                    }
                }
            }
            if (open == 0) break;
            std::size_t i = free_dims;
            while (i > 0 && v[i - 1] == t) v[--i] = -t;
            if (i == 0) break;
            ++v[i - 1];
        }
    }
    return out;
}

}  // namespace specker
