#include "repart/graver.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "repart/errors.hpp"

namespace repart {

bool sign_compatible(std::span<const Int> a, std::span<const Int> b) {
    if (a.size() != b.size())
        throw InputError("sign_compatible: length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i] < 0 && b[i] > 0) || (a[i] > 0 && b[i] < 0))
            return false;
    return true;
}

bool sqsubseteq(std::span<const Int> a, std::span<const Int> b) {
    if (!sign_compatible(a, b))
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if ((a[i] < 0 ? -a[i] : a[i]) > (b[i] < 0 ? -b[i] : b[i]))
            return false;
    return true;
}

std::vector<IntVec> kernel_lattice_basis(const ConfigMatrix& a) {
    const std::size_t q = a.q();
    const std::size_t rows = static_cast<std::size_t>(a.k());
    // Column operations on M = A, mirrored on U = I, keep A U = M.
    std::vector<IntVec> m = a.rows();
    std::vector<IntVec> u(q, IntVec(q, 0));
    for (std::size_t i = 0; i < q; ++i)
        u[i][i] = 1;

    auto col_axpy = [&](std::size_t dst, std::size_t src, Int factor) {
        for (auto& row : m)
            row[dst] = checked_add(row[dst], -checked_mul(factor, row[src]));
        for (auto& row : u)
            row[dst] = checked_add(row[dst], -checked_mul(factor, row[src]));
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (auto& row : m)
            std::swap(row[x], row[y]);
        for (auto& row : u)
            std::swap(row[x], row[y]);
    };

    std::size_t pivot = 0;
    for (std::size_t i = 0; i < rows && pivot < q; ++i) {
        for (std::size_t j = pivot + 1; j < q; ++j) {
            while (m[i][j] != 0) {
                col_axpy(pivot, j, m[i][pivot] / m[i][j]);
                col_swap(pivot, j);
            }
        }
        if (m[i][pivot] != 0)
            ++pivot;
    }

    std::vector<IntVec> basis;
    for (std::size_t j = pivot; j < q; ++j) {
        IntVec v(q);
        for (std::size_t r = 0; r < q; ++r)
            v[r] = u[r][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool GraverBasis::contains(std::span<const Int> g) const {
    IntVec key(g.begin(), g.end());
    return std::binary_search(elements.begin(), elements.end(), key);
}

Int GraverBasis::max_norm1() const {
    Int m = 0;
    for (const auto& g : elements)
        m = std::max(m, norm1(g));
    return m;
}

Int GraverBasis::max_norm_inf() const {
    Int m = 0;
    for (const auto& g : elements)
        m = std::max(m, norm_inf(g));
    return m;
}

// ---------------------------------------------------------------------------

namespace {

// Element with its sign pattern as bitmasks, so most conformality tests are
// two mask comparisons.
struct Entry {
    IntVec v;
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;

    explicit Entry(IntVec vec) : v(std::move(vec)) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] > 0)
                pos |= 1u << i;
            else if (v[i] < 0)
                neg |= 1u << i;
        }
    }
};

bool conformal_le(const Entry& g, const Entry& s) {
    if ((g.pos & ~s.pos) || (g.neg & ~s.neg))
        return false;
    for (std::size_t i = 0; i < g.v.size(); ++i)
        if ((g.v[i] < 0 ? -g.v[i] : g.v[i]) > (s.v[i] < 0 ? -s.v[i] : s.v[i]))
            return false;
    return true;
}

class Completion {
public:
    explicit Completion(std::size_t q) : q_(q) {}

    void seed(const std::vector<IntVec>& basis) {
        for (const auto& b : basis) {
            insert(b);
            insert(negated(b));
        }
    }

    void run() {
        while (!pairs_.empty()) {
            auto [i, j] = pairs_.front();
            pairs_.pop_front();
            const Entry& f = elems_[i];
            const Entry& g = elems_[j];
            // conformal sums reduce to zero by either summand
            if (!(f.pos & g.neg) && !(f.neg & g.pos))
                continue;
            Entry s(added(f.v, g.v));
            if (is_zero(s.v))
                continue;
            reduce(s);
            if (!is_zero(s.v))
                insert(std::move(s.v));
        }
    }

    std::vector<IntVec> minimal_elements() const {
        std::vector<IntVec> out;
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            bool minimal = true;
            for (std::size_t j = 0; j < elems_.size() && minimal; ++j)
                if (i != j && conformal_le(elems_[j], elems_[i]))
                    minimal = false;
            if (minimal)
                out.push_back(elems_[i].v);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    void reduce(Entry& s) const {
        bool changed = true;
        while (changed && (s.pos | s.neg)) {
            changed = false;
            for (const Entry& g : elems_) {
                if (conformal_le(g, s)) {
                    // subtract as many times as g still fits
                    Int times = INT64_MAX;
                    for (std::size_t i = 0; i < q_; ++i)
                        if (g.v[i] != 0)
                            times = std::min(times, s.v[i] / g.v[i]);
                    for (std::size_t i = 0; i < q_; ++i)
                        s.v[i] = checked_add(s.v[i], -checked_mul(times, g.v[i]));
                    s = Entry(std::move(s.v));
                    changed = true;
                    break;
                }
            }
        }
    }

    void insert(IntVec v) {
        if (!seen_.insert(v).second)
            return;
        const std::size_t idx = elems_.size();
        elems_.emplace_back(std::move(v));
        for (std::size_t i = 0; i < idx; ++i)
            pairs_.emplace_back(i, idx);
    }

    std::size_t q_;
    std::vector<Entry> elems_;
    std::set<IntVec> seen_;
    std::deque<std::pair<std::size_t, std::size_t>> pairs_;
};

} // namespace

GraverBasis compute_graver(const ConfigMatrix& a, int max_k) {
    if (a.k() > max_k)
        throw ResourceLimitError("Graver computation guard: k=" + std::to_string(a.k()) + " exceeds " +
                                 std::to_string(max_k));
    if (a.q() > 32)
        throw ResourceLimitError("Graver computation supports at most 32 columns");
    GraverBasis out;
    out.k = a.k();
    for (std::size_t j = 0; j < a.q(); ++j)
        out.columns.push_back(a.column(j));

    Completion completion(a.q());
    completion.seed(kernel_lattice_basis(a));
    completion.run();
    out.elements = completion.minimal_elements();

    for (const auto& g : out.elements)
        if (!is_zero(a.multiply(g)))
            throw InvariantError("Graver element " + to_string(g) + " is not in the kernel");
    return out;
}

std::shared_ptr<const GraverBasis> cached_graver(const ConfigMatrix& a, int max_k) {
    static std::mutex mu;
    static std::map<std::vector<IntVec>, std::shared_ptr<const GraverBasis>> cache;
    std::vector<IntVec> key;
    for (std::size_t j = 0; j < a.q(); ++j)
        key.push_back(a.column(j));
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    auto basis = std::make_shared<const GraverBasis>(compute_graver(a, max_k));
    std::lock_guard lock(mu);
    return cache.emplace(std::move(key), std::move(basis)).first->second;
}

std::vector<IntVec> decompose(std::span<const Int> h, const ConfigMatrix& a, const GraverBasis& g) {
    if (h.size() != a.q())
        throw InputError("decompose: vector length does not match the matrix");
    if (is_zero(h))
        throw InputError("decompose: zero vector is not a lattice element");
    if (!is_zero(a.multiply(h)))
        throw InputError("decompose: " + to_string(h) + " is not in the kernel");

    std::vector<IntVec> terms;
    IntVec rem(h.begin(), h.end());
    while (!is_zero(rem)) {
        auto it = std::find_if(g.elements.begin(), g.elements.end(),
                               [&](const IntVec& e) { return sqsubseteq(e, rem); });
        if (it == g.elements.end())
            throw InvariantError("basis incomplete: no element below remainder " + to_string(rem));
        terms.push_back(*it);
        rem = subtracted(rem, *it);
    }
    return terms;
}

// ---------------------------------------------------------------------------

Int bareiss_determinant(std::vector<IntVec> m) {
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (m[p][p] == 0) {
            std::size_t r = p + 1;
            while (r < n && m[r][p] == 0)
                ++r;
            if (r == n)
                return 0;
            std::swap(m[p], m[r]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < n; ++i) {
            for (std::size_t j = p + 1; j < n; ++j) {
                Int num = checked_add(checked_mul(m[i][j], m[p][p]), -checked_mul(m[i][p], m[p][j]));
                m[i][j] = num / prev;  // exact by Sylvester's identity
            }
            m[i][p] = 0;
        }
        prev = m[p][p];
    }
    return sign * m[n - 1][n - 1];
}

namespace {

void for_each_subset(std::size_t n, std::size_t size, std::vector<std::size_t>& cur, std::size_t from,
                     const auto& fn) {
    if (cur.size() == size) {
        fn(cur);
        return;
    }
    for (std::size_t i = from; i + (size - cur.size()) <= n; ++i) {
        cur.push_back(i);
        for_each_subset(n, size, cur, i + 1, fn);
        cur.pop_back();
    }
}

} // namespace

Int max_subdeterminant(const ConfigMatrix& a, int max_k) {
    if (a.k() > max_k)
        throw ResourceLimitError("subdeterminant guard: k=" + std::to_string(a.k()) + " exceeds " +
                                 std::to_string(max_k));
    const std::size_t rows = static_cast<std::size_t>(a.k());
    const std::size_t cols = a.q();
    Int best = 0;
    for (std::size_t size = 1; size <= std::min(rows, cols); ++size) {
        std::vector<std::size_t> rsel, csel;
        for_each_subset(rows, size, rsel, 0, [&](const std::vector<std::size_t>& rs) {
            for_each_subset(cols, size, csel, 0, [&](const std::vector<std::size_t>& cs) {
                std::vector<IntVec> sub(size, IntVec(size));
                for (std::size_t i = 0; i < size; ++i)
                    for (std::size_t j = 0; j < size; ++j)
                        sub[i][j] = a.at(rs[i], cs[j]);
                Int d = bareiss_determinant(std::move(sub));
                best = std::max(best, d < 0 ? -d : d);
            });
        });
    }
    return best;
}

Int ceil_exp(int k) {
    if (k < 0 || k > 11)
        throw ResourceLimitError("ceil_exp is exact only for 0 <= k <= 11");
    __extension__ using Wide = __int128;  // 1457^11 overflows 64 bits
    Wide num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= 1457;
        den *= 536;
    }
    return static_cast<Int>((num + den - 1) / den);
}

BoundReport certify_bounds(const GraverBasis& g, const ConfigMatrix& a, int max_k) {
    BoundReport r;
    r.max_norm_inf = g.max_norm_inf();
    r.max_norm1 = g.max_norm1();
    r.delta = max_subdeterminant(a, max_k);
    r.q_delta = checked_mul(static_cast<Int>(a.q()), r.delta);
    r.ceil_e_k = ceil_exp(a.k());
    r.norm_inf_ok = r.max_norm_inf <= r.q_delta;
    r.delta_ok = r.delta <= r.ceil_e_k;
    return r;
}

} // namespace repart
