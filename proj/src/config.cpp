#include "repart/config.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <string>

#include "repart/errors.hpp"

namespace repart {

Int nd(std::span<const Int> c) {
    Int s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        s = checked_add(s, checked_mul(static_cast<Int>(i + 1), c[i]));
    return s;
}

Configuration configuration_from_sizes(int k, std::span<const int> sizes) {
    Configuration c(static_cast<std::size_t>(k), 0);
    for (int s : sizes) {
        if (s < 1 || s > k)
            throw InputError("component size " + std::to_string(s) + " outside [1, " + std::to_string(k) + "]");
        ++c[static_cast<std::size_t>(s - 1)];
    }
    return c;
}

namespace {

void enumerate_rec(int k, std::size_t i, Int remaining, Configuration& cur, std::vector<Configuration>& out) {
    const Int part = static_cast<Int>(i + 1);
    if (i + 1 == cur.size()) {
        if (remaining % part == 0) {
            cur[i] = remaining / part;
            out.push_back(cur);
        }
        return;
    }
    for (Int c = remaining / part; c >= 0; --c) {
        cur[i] = c;
        enumerate_rec(k, i + 1, remaining - c * part, cur, out);
    }
    cur[i] = 0;
}

} // namespace

ConfigSpace::ConfigSpace(int k) : k_(k) {
    if (k < 1)
        throw InputError("k must be at least 1");
    if (k > kMaxConfigK)
        throw ResourceLimitError("k=" + std::to_string(k) + " exceeds the configuration guard " +
                                 std::to_string(kMaxConfigK));
    Configuration cur(static_cast<std::size_t>(k), 0);
    enumerate_rec(k, 0, k, cur, configs_);
    for (std::size_t i = 0; i < configs_.size(); ++i)
        index_.emplace(configs_[i], i);
}

std::optional<std::size_t> ConfigSpace::index_of(const Configuration& c) const {
    auto it = index_.find(c);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

ConfigSpace enumerate_configurations(int k) { return ConfigSpace(k); }

std::vector<Configuration> enumerate_pseudo_configurations(int k) {
    if (k < 1)
        throw InputError("k must be at least 1");
    if (k > kMaxConfigK)
        throw ResourceLimitError("k=" + std::to_string(k) + " exceeds the configuration guard " +
                                 std::to_string(kMaxConfigK));
    std::vector<Configuration> out;
    Configuration cur(static_cast<std::size_t>(k), 0);
    enumerate_rec(k, 0, 2 * static_cast<Int>(k), cur, out);
    return out;
}

const ConfigSpace& config_space(int k) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const ConfigSpace>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[k];
    if (!slot)
        slot = std::make_unique<const ConfigSpace>(k);
    return *slot;
}

Configuration pseudo_configuration(int k, std::span<const int> others_a, std::span<const int> others_b,
                                   int merged_size) {
    if (merged_size > k)
        throw InputError("merged component of size " + std::to_string(merged_size) + " exceeds k=" +
                         std::to_string(k));
    std::vector<int> sizes(others_a.begin(), others_a.end());
    sizes.insert(sizes.end(), others_b.begin(), others_b.end());
    sizes.push_back(merged_size);
    Configuration c = configuration_from_sizes(k, sizes);
    if (nd(c) != 2 * static_cast<Int>(k))
        throw InvariantError("pseudo configuration " + to_string(c) + " has nd " + std::to_string(nd(c)) +
                             ", expected " + std::to_string(2 * k));
    return c;
}

// ---------------------------------------------------------------------------

ConfigMatrix::ConfigMatrix(const ConfigSpace& space, Configuration pseudo) : k_(space.k()) {
    if (static_cast<int>(pseudo.size()) != k_)
        throw InputError("pseudo configuration has wrong length");
    columns_ = space.configurations();
    columns_.push_back(std::move(pseudo));
}

ConfigMatrix::ConfigMatrix(int k, std::vector<IntVec> columns) : k_(k), columns_(std::move(columns)) {
    if (columns_.empty())
        throw InputError("matrix needs at least one column");
    for (const auto& c : columns_)
        if (static_cast<int>(c.size()) != k_)
            throw InputError("column length differs from row count");
}

IntVec ConfigMatrix::multiply(std::span<const Int> y) const {
    if (y.size() != q())
        throw InputError("vector length " + std::to_string(y.size()) + " does not match q=" + std::to_string(q()));
    IntVec r(static_cast<std::size_t>(k_), 0);
    for (std::size_t j = 0; j < q(); ++j) {
        if (y[j] == 0)
            continue;
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = checked_add(r[i], checked_mul(columns_[j][i], y[j]));
    }
    return r;
}

std::vector<IntVec> ConfigMatrix::rows() const {
    std::vector<IntVec> out(static_cast<std::size_t>(k_), IntVec(q()));
    for (std::size_t j = 0; j < q(); ++j)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i][j] = columns_[j][i];
    return out;
}

// ---------------------------------------------------------------------------

SystemState build_state(std::span<const std::vector<int>> untouched, const Configuration& pseudo,
                        const ConfigSpace& space) {
    ConfigMatrix a(space, pseudo);
    SystemState st;
    st.x.assign(a.q(), 0);
    st.x[a.pseudo_index()] = 1;
    for (const auto& sizes : untouched) {
        Configuration c = configuration_from_sizes(space.k(), sizes);
        auto idx = space.index_of(c);
        if (!idx)
            throw InvariantError("cluster census " + to_string(c) + " is not a configuration of k=" +
                                 std::to_string(space.k()));
        ++st.x[*idx];
    }
    st.u = a.multiply(st.x);
    return st;
}

bool is_valid_target(std::span<const Int> y, const ConfigMatrix& a, std::span<const Int> u) {
    if (y.size() != a.q() || u.size() != static_cast<std::size_t>(a.k()))
        return false;
    if (!is_nonnegative(y) || y[a.pseudo_index()] != 0)
        return false;
    IntVec ay = a.multiply(y);
    return std::equal(ay.begin(), ay.end(), u.begin());
}

// ---------------------------------------------------------------------------

namespace {

// Exact packing of component counts into clusters: at each step the largest
// remaining size must go somewhere, so only configurations containing it are tried.
class PackingSolver {
public:
    explicit PackingSolver(const ConfigMatrix& a) : a_(a) {}

    bool feasible(const IntVec& rem) {
        auto it = memo_.find(rem);
        if (it != memo_.end())
            return it->second >= 0;
        std::size_t top = rem.size();
        while (top > 0 && rem[top - 1] == 0)
            --top;
        if (top == 0) {
            memo_.emplace(rem, static_cast<long>(a_.q()));
            return true;
        }
        long choice = -1;
        IntVec next(rem.size());
        for (std::size_t j = 0; j + 1 < a_.q() && choice < 0; ++j) {
            const IntVec& c = a_.column(j);
            if (c[top - 1] == 0)
                continue;
            bool fits = true;
            for (std::size_t i = 0; i < rem.size(); ++i) {
                next[i] = rem[i] - c[i];
                fits = fits && next[i] >= 0;
            }
            if (fits && feasible(next))
                choice = static_cast<long>(j);
        }
        memo_[rem] = choice;
        return choice >= 0;
    }

    IntVec reconstruct(IntVec rem) {
        IntVec y(a_.q(), 0);
        while (!is_zero(rem)) {
            long j = memo_.at(rem);
            ++y[static_cast<std::size_t>(j)];
            rem = subtracted(rem, a_.column(static_cast<std::size_t>(j)));
        }
        return y;
    }

private:
    const ConfigMatrix& a_;
    std::map<IntVec, long> memo_;  // chosen column, q for the empty state, -1 if infeasible
};

} // namespace

std::optional<IntVec> solve_any_target(const ConfigMatrix& a, std::span<const Int> u) {
    if (u.size() != static_cast<std::size_t>(a.k()) || !is_nonnegative(u))
        return std::nullopt;
    IntVec rem(u.begin(), u.end());
    if (nd(rem) % a.k() != 0)
        return std::nullopt;
    PackingSolver solver(a);
    if (!solver.feasible(rem))
        return std::nullopt;
    return solver.reconstruct(rem);
}

// ---------------------------------------------------------------------------

namespace {

// Enumerates w with w[pseudo] = 1, A w = 0, w <= x and ||w||_1 = d, one
// coordinate at a time in configuration order.
class DistanceSearch {
public:
    DistanceSearch(std::span<const Int> x, const ConfigMatrix& a, std::int64_t budget)
        : x_(x), a_(a), budget_(budget), w_(a.q(), 0) {
        const std::size_t free = a.q() - 1;
        const std::size_t rows = static_cast<std::size_t>(a.k());
        suffix_max_.assign(free + 1, IntVec(rows, 0));
        for (std::size_t j = free; j-- > 0;)
            for (std::size_t i = 0; i < rows; ++i)
                suffix_max_[j][i] = std::max(suffix_max_[j + 1][i], a.at(i, j));
    }

    std::optional<IntVec> run(Int d) {
        best_.reset();
        w_.assign(a_.q(), 0);
        w_[a_.pseudo_index()] = 1;
        IntVec residual = negated(a_.pseudo());
        descend(0, d - 1, residual);
        return best_;
    }

private:
    bool pruned(std::size_t j, Int left, const IntVec& r) const {
        Int weighted = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            Int mag = r[i] < 0 ? -r[i] : r[i];
            if (mag > left * suffix_max_[j][i])
                return true;
            weighted += static_cast<Int>(i + 1) * r[i];
        }
        // every remaining column has nd = k, so nd(r) = k * sum(w_rest)
        const Int k = a_.k();
        if (weighted % k != 0)
            return true;
        Int s = weighted / k;
        Int mag = s < 0 ? -s : s;
        return mag > left || (left - mag) % 2 != 0;
    }

    void descend(std::size_t j, Int left, IntVec& r) {
        if (++visited_ > budget_)
            throw ResourceLimitError("target search exceeded budget of " + std::to_string(budget_) + " nodes");
        const std::size_t last = a_.q() - 1;
        if (j == last) {
            if (left == 0 && is_zero(r))
                offer();
            return;
        }
        if (pruned(j, left, r))
            return;
        const Int hi = std::min(left, x_[j]);
        for (Int v = -left; v <= hi; ++v) {
            Int mag = v < 0 ? -v : v;
            if (j + 1 == last && mag != left)
                continue;
            w_[j] = v;
            const IntVec& col = a_.column(j);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] -= col[i] * v;
            descend(j + 1, left - mag, r);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] += col[i] * v;
        }
        w_[j] = 0;
    }

    void offer() {
        IntVec y(x_.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = x_[i] - w_[i];
        if (!best_ || colex_less(y, *best_))
            best_ = std::move(y);
    }

    std::span<const Int> x_;
    const ConfigMatrix& a_;
    std::int64_t budget_;
    std::int64_t visited_ = 0;
    IntVec w_;
    std::vector<IntVec> suffix_max_;
    std::optional<IntVec> best_;
};

} // namespace

std::optional<MinTarget> brute_force_min_target(std::span<const Int> x, const ConfigMatrix& a,
                                                std::span<const Int> u, std::int64_t budget) {
    if (x.size() != a.q())
        throw InputError("state vector length does not match the matrix");
    if (x[a.pseudo_index()] != 1 || !is_nonnegative(x))
        throw InputError("state vector must be nonnegative with pseudo entry 1");
    if (!solve_any_target(a, u))
        return std::nullopt;

    // ||x - y||_1 <= ||x||_1 + ||y||_1 = (l - 1) + l
    const Int l = norm1(x) + 1;
    DistanceSearch search(x, a, budget);
    for (Int d = 3; d <= 2 * l - 1; d += 2) {
        if (auto y = search.run(d))
            return MinTarget{std::move(*y), d};
    }
    throw InvariantError("a valid target exists but none was found within distance " + std::to_string(2 * l - 1));
}

} // namespace repart
