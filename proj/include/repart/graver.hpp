#pragma once

#include <memory>
#include <span>
#include <vector>

#include "repart/config.hpp"
#include "repart/intvec.hpp"

namespace repart {

/// a_i * b_i >= 0 everywhere. Throws InputError on a length mismatch.
bool sign_compatible(std::span<const Int> a, std::span<const Int> b);

/// The conformal order: sign-compatible and |a_i| <= |b_i| everywhere.
bool sqsubseteq(std::span<const Int> a, std::span<const Int> b);

/// A Z-basis of the integer kernel of A (column-style Hermite reduction).
std::vector<IntVec> kernel_lattice_basis(const ConfigMatrix& a);

/// The conformally minimal nonzero kernel elements of a matrix, sorted
/// lexicographically. Closed under negation.
struct GraverBasis {
    int k = 0;
    std::vector<IntVec> columns;  // source matrix, identifies the basis
    std::vector<IntVec> elements;

    bool contains(std::span<const Int> g) const;
    Int max_norm1() const;
    Int max_norm_inf() const;
};

inline constexpr int kDefaultGraverMaxK = 6;

/// Completion procedure: start from a kernel basis and its negations, form
/// pair sums, reduce each by conformal subtraction, keep irreducible
/// remainders, repeat to a fixpoint, then keep the minimal elements.
/// Throws ResourceLimitError when k > max_k.
GraverBasis compute_graver(const ConfigMatrix& a, int max_k = kDefaultGraverMaxK);

/// Memoized compute_graver, keyed by the matrix columns. Thread-safe.
std::shared_ptr<const GraverBasis> cached_graver(const ConfigMatrix& a, int max_k = kDefaultGraverMaxK);

/// Writes h as a sum of basis elements each conformal to h. Throws
/// InputError if h is zero or outside the kernel and InvariantError if the
/// basis cannot finish the decomposition.
std::vector<IntVec> decompose(std::span<const Int> h, const ConfigMatrix& a, const GraverBasis& g);

/// Exact determinant by fraction-free (Bareiss) elimination.
Int bareiss_determinant(std::vector<IntVec> m);

inline constexpr int kDefaultSubdeterminantMaxK = 5;

/// Largest |det| over all square submatrices. Throws ResourceLimitError when k > max_k.
Int max_subdeterminant(const ConfigMatrix& a, int max_k = kDefaultSubdeterminantMaxK);

/// Smallest integer >= e^k, from the rational upper bound 1457/536 of e.
/// Exact for 0 <= k <= 11; throws ResourceLimitError beyond.
Int ceil_exp(int k);

struct BoundReport {
    Int max_norm_inf = 0;
    Int max_norm1 = 0;
    Int delta = 0;
    Int q_delta = 0;
    Int ceil_e_k = 0;
    bool norm_inf_ok = false;  // every ||g||_inf <= q * delta
    bool delta_ok = false;     // delta <= ceil(e^k)

    bool passed() const { return norm_inf_ok && delta_ok; }
};

BoundReport certify_bounds(const GraverBasis& g, const ConfigMatrix& a,
                           int max_k = kDefaultSubdeterminantMaxK);

} // namespace repart
