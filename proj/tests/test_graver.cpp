#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "repart/errors.hpp"
#include "repart/graver.hpp"
#include "repart/rng.hpp"

using namespace repart;

namespace {

std::set<IntVec> as_set(const GraverBasis& g) { return {g.elements.begin(), g.elements.end()}; }

} // namespace

TEST_CASE("sign compatibility and the conformal order") {
    CHECK(sign_compatible(IntVec{1, -2, 0}, IntVec{3, 0, 0}));
    CHECK_FALSE(sign_compatible(IntVec{1, -2}, IntVec{1, 2}));
    CHECK_FALSE(sign_compatible(IntVec{1, 1}, IntVec{-1, -1}));
    CHECK_THROWS_AS(sign_compatible(IntVec{1}, IntVec{1, 2}), InputError);
    CHECK(sqsubseteq(IntVec{0, 1, -1}, IntVec{0, 2, -1}));
    CHECK_FALSE(sqsubseteq(IntVec{0, 2}, IntVec{0, 1}));
    CHECK(sqsubseteq(IntVec{3, -4}, IntVec{3, -4}));
}

TEST_CASE("small Graver bases computed by hand") {
    CHECK(as_set(compute_graver(ConfigMatrix(config_space(2), IntVec{2, 1}))) ==
          std::set<IntVec>{{1, 1, -1}, {-1, -1, 1}});
    CHECK(as_set(compute_graver(ConfigMatrix(config_space(2), IntVec{0, 2}))) ==
          std::set<IntVec>{{0, 2, -1}, {0, -2, 1}});
    CHECK(as_set(compute_graver(ConfigMatrix(config_space(1), IntVec{2}))) ==
          std::set<IntVec>{{2, -1}, {-2, 1}});
}

TEST_CASE("Graver bases of textbook matrices") {
    // [1 1 1]: differences of unit vectors.
    ConfigMatrix ones(1, {{1}, {1}, {1}});
    CHECK(as_set(compute_graver(ones)) ==
          std::set<IntVec>{{1, -1, 0}, {-1, 1, 0}, {1, 0, -1}, {-1, 0, 1}, {0, 1, -1}, {0, -1, 1}});
    // [1 2 3], compared with the box oracle.
    ConfigMatrix twisted(1, {{1}, {2}, {3}});
    const auto g = compute_graver(twisted);
    CHECK(as_set(g) == oracle::graver_by_box({{1}, {2}, {3}}, 6));
    CHECK(g.contains(IntVec{1, 1, -1}));
    CHECK(g.contains(IntVec{0, 3, -2}));
}

TEST_CASE("Graver bases equal the box enumeration for k <= 3") {
    for (int k = 1; k <= 3; ++k) {
        for (const IntVec& pc : enumerate_pseudo_configurations(k)) {
            CAPTURE(to_string(pc));
            ConfigMatrix a(config_space(k), pc);
            const auto cols = oracle::matrix_columns(k, pc);
            const Int box = static_cast<Int>(cols.size()) * oracle::max_subdet(cols);
            CHECK(as_set(compute_graver(a)) == oracle::graver_by_box(cols, box));
        }
    }
}

TEST_CASE("Graver elements are minimal kernel elements closed under negation") {
    for (int k = 4; k <= 5; ++k) {
        for (const IntVec& pc : enumerate_pseudo_configurations(k)) {
            ConfigMatrix a(config_space(k), pc);
            auto g = cached_graver(a);
            CHECK(std::is_sorted(g->elements.begin(), g->elements.end()));
            for (const IntVec& e : g->elements) {
                CHECK(is_zero(oracle::mul(oracle::matrix_columns(k, pc), e)));
                CHECK(g->contains(negated(e)));
            }
            for (const IntVec& e : g->elements)
                for (const IntVec& f : g->elements)
                    if (e != f)
                        CHECK_FALSE(oracle::conformal_leq(f, e));
        }
    }
}

TEST_CASE("kernel lattice basis spans the box kernel at k = 3") {
    for (const IntVec& pc : enumerate_pseudo_configurations(3)) {
        ConfigMatrix a(config_space(3), pc);
        auto basis = kernel_lattice_basis(a);
        for (const auto& b : basis)
            CHECK(is_zero(a.multiply(b)));
        // Every Graver element must be an integer combination: at k = 3 the
        // kernel has rank 1, so each element is a multiple of the generator.
        REQUIRE(basis.size() == 1);
        for (const IntVec& e : compute_graver(a).elements) {
            std::size_t i = 0;
            while (basis[0][i] == 0)
                ++i;
            REQUIRE(e[i] % basis[0][i] == 0);
            const Int m = e[i] / basis[0][i];
            for (std::size_t j = 0; j < e.size(); ++j)
                CHECK(e[j] == m * basis[0][j]);
        }
    }
}

TEST_CASE("decomposition") {
    ConfigMatrix a(config_space(2), IntVec{2, 1});
    const auto g = compute_graver(a);
    CHECK(decompose(IntVec{2, 2, -2}, a, g) == std::vector<IntVec>{{1, 1, -1}, {1, 1, -1}});
    CHECK(decompose(IntVec{-1, -1, 1}, a, g) == std::vector<IntVec>{{-1, -1, 1}});
    ConfigMatrix b(config_space(2), IntVec{0, 2});
    CHECK(decompose(IntVec{0, -4, 2}, b, compute_graver(b)) == std::vector<IntVec>{{0, -2, 1}, {0, -2, 1}});
    CHECK_THROWS_AS(decompose(IntVec{0, 0, 0}, a, g), InputError);
    CHECK_THROWS_AS(decompose(IntVec{1, 0, 0}, a, g), InputError);
}

TEST_CASE("random kernel vectors decompose conformally") {
    SplitMix64 rng(5);
    for (int k = 3; k <= 4; ++k) {
        for (const IntVec& pc : enumerate_pseudo_configurations(k)) {
            ConfigMatrix a(config_space(k), pc);
            auto g = cached_graver(a);
            auto basis = kernel_lattice_basis(a);
            for (int trial = 0; trial < 40; ++trial) {
                IntVec h(a.q(), 0);
                for (const auto& b : basis)
                    h = added(h, [&] {
                        IntVec s = b;
                        const Int c = rng.between(-2, 2);
                        for (auto& v : s)
                            v *= c;
                        return s;
                    }());
                if (is_zero(h))
                    continue;
                IntVec sum(h.size(), 0);
                for (const IntVec& p : decompose(h, a, *g)) {
                    CHECK(oracle::conformal_leq(p, h));
                    sum = added(sum, p);
                }
                CHECK(sum == h);
            }
        }
    }
}

TEST_CASE("determinants and subdeterminants against cofactor expansion") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.between(1, 5));
        std::vector<IntVec> m(n, IntVec(n));
        for (auto& row : m)
            for (auto& v : row)
                v = rng.between(-4, 4);
        CHECK(bareiss_determinant(m) == oracle::cofactor_det(m));
    }
    CHECK(max_subdeterminant(ConfigMatrix(config_space(2), IntVec{2, 1})) == 2);
    CHECK(max_subdeterminant(ConfigMatrix(config_space(1), IntVec{2})) == 2);
    for (int k = 1; k <= 4; ++k)
        for (const IntVec& pc : enumerate_pseudo_configurations(k))
            CHECK(max_subdeterminant(ConfigMatrix(config_space(k), pc)) ==
                  oracle::max_subdet(oracle::matrix_columns(k, pc)));
    CHECK_THROWS_AS(max_subdeterminant(ConfigMatrix(config_space(6), enumerate_pseudo_configurations(6)[0])),
                    ResourceLimitError);
}

TEST_CASE("ceil(e^k)") {
    for (int k = 0; k <= 11; ++k)
        CHECK(ceil_exp(k) == static_cast<Int>(std::ceil(std::exp(static_cast<long double>(k)))));
    CHECK_THROWS_AS(ceil_exp(12), ResourceLimitError);
}

TEST_CASE("bound certificate") {
    ConfigMatrix a(config_space(2), IntVec{2, 1});
    const BoundReport r = certify_bounds(compute_graver(a), a);
    CHECK(r.max_norm_inf == 1);
    CHECK(r.max_norm1 == 3);
    CHECK(r.delta == 2);
    CHECK(r.q_delta == 6);
    CHECK(r.ceil_e_k == 8);
    CHECK(r.passed());
}

TEST_CASE("Graver guard") {
    CHECK_THROWS_AS(compute_graver(ConfigMatrix(config_space(4), enumerate_pseudo_configurations(4)[0]), 3),
                    ResourceLimitError);
}
