#pragma once

#include <string>
#include <vector>

#include "dlh/finite_algebra.hpp"
#include "dlh/linalg.hpp"
#include "dlh/symfn.hpp"
#include "dlh/unipoly.hpp"

namespace dlh {

// Deformation of the cohomology of Gr(a,N) by a multiset Sigma of N rational
// roots: the quotient of the symmetric polynomial ring in x_1..x_a by
// h_k(X - Sigma) for N-a+1 <= k <= N, realized in elementary coordinates
// e_1..e_a. The dimension is C(N,a) and the Schur classes indexed by
// partitions in the a x (N-a) box form a basis; both facts are verified at
// construction time.
struct GrassQuotientModel {
    int N = 0;
    int a = 0;
    RootMultiset sigma;
    FiniteAlgebra algebra;                // basis: standard monomials in e_1..e_a
    std::vector<Partition> schur_shapes;  // partitions in the a x (N-a) box
    std::vector<AlgElt> schur_classes;    // classes of the Schur polynomials
};

GrassQuotientModel build_quotient_model(int N, int a, const RootMultiset& sigma);

// Class of a polynomial in x_1..x_a that is symmetric in all its variables.
AlgElt symmetric_class(const GrassQuotientModel& qm, const MultiPoly& f);

// Expansion of an element in the Schur-class basis.
std::vector<Rational> schur_coords(const GrassQuotientModel& qm, const AlgElt& u);

// The same ring modeled on antisymmetric tensors. Basis: wedge monomials
// x^{i_1} ^ x^{i_2} ^ ... with N > i_1 > ... > i_a >= 0, realized inside the
// N^a-dimensional ring (Q[x]/P)^{(x)a} as alternating sums over permutations.
// wedge[k] lists the exponents of the k-th basis vector, aligned with
// partitions_in_box(a, N-a) through i_j = alpha_j + a - j.
struct ExteriorModel {
    int N = 0;
    int a = 0;
    RootMultiset sigma;
    std::vector<std::vector<int>> wedge;
    std::vector<SparseVec> realized;  // coordinates in the tensor basis
    int dim = 0;                      // verified rank of the realization
};

ExteriorModel build_exterior_model(int N, int a, const RootMultiset& sigma);

// Algebra on the wedge basis with the pushforward product
// (V*f) o (V*g) := V*(f*g), where V is the Vandermonde alternant: products
// are computed in the tensor ring and divided by V on the antisymmetric span
// by an exact linear solve.
FiniteAlgebra exterior_algebra(const ExteriorModel& em);

// Verifies that sending the Schur class of alpha to the wedge monomial with
// exponents alpha_j + a - j is a unital algebra isomorphism, by comparing
// all structure constants of the two models. Throws CheckFailure with a
// witness pair on mismatch.
void models_agree(const GrassQuotientModel& qm, const ExteriorModel& em);

// Idempotent of Q[x]/P supported at the root lambda, computed by the
// extended Euclidean algorithm on (x-lambda)^m and P/(x-lambda)^m.
UniPoly crt_idempotent(const UniPoly& P, const Rational& lambda);

// Representatives of the right cosets of the Young subgroup
// S_{b_1} x S_{b_2} x ... inside S_a, where a = sum of the block sizes,
// chosen so that the same set also represents every left coset. Minimal
// length alone does not give such a set, so a common transversal is found by
// matching right to left cosets along nonempty intersections, taking the
// fewest-inversion permutation in each chosen intersection. Both transversal
// properties are asserted before returning.
std::vector<std::vector<int>> coset_transversal(const std::vector<int>& blocks);

// Symmetric representative in x_1..x_a of the idempotent attached to a
// multisubset of roots: the sum, over all distinct arrangements (t_1..t_a)
// of the multiset, of prod_i 1_{t_i}(x_i), where 1_lambda is the CRT
// idempotent of the root. counts[j] gives the number of copies of the j-th
// distinct root of sigma; counts beyond sigma's multiplicities are allowed
// and produce a class that reduces to zero in the quotient.
MultiPoly idempotent_symmetric_rep(int a, const RootMultiset& sigma,
                                   const std::vector<int>& counts);

// The complete idempotent family of the quotient model: one idempotent per
// multisubset A of sigma with |A| = a. Orthogonality, idempotency and
// completeness are verified at construction time.
struct IdempotentFamily {
    GrassQuotientModel model;
    std::vector<Rational> roots;            // distinct roots of sigma
    std::vector<UniPoly> root_idempotents;  // CRT idempotent per distinct root
    std::vector<RootMultiset> subsets;      // multisubsets A with |A| = a
    std::vector<MultiPoly> symmetric_reps;  // representatives in x_1..x_a
    std::vector<AlgElt> idempotents;        // classes in the quotient model
    std::vector<int> summand_dims;          // dimension of each cut summand
};

IdempotentFamily idempotent_family(int N, int a, const RootMultiset& sigma);

// One block of the decomposition: the multisubset A, its per-root counts,
// the tensor product of undeformed models over the roots, and the linear map
// from source coordinates onto this block.
struct DecompositionSummand {
    RootMultiset subset;
    std::vector<int> counts;
    FiniteAlgebra target;
    RatMat map;  // target.dim() rows, source dimension columns
};

// Algebra isomorphism from the deformed ring onto the direct sum of the
// summand targets. Every summand map is verified to be unital and
// multiplicative on all basis pairs; forward stacks them into a square
// matrix and inverse is its exact inverse.
struct DecompositionIso {
    GrassQuotientModel source;
    std::vector<DecompositionSummand> summands;
    RatMat forward;
    RatMat inverse;
};

DecompositionIso decomposition_iso(int N, int a, const RootMultiset& sigma);

// Quotient of (cut big ring) (x) (cut small ring) (x) (cut small ring) by
// the relations identifying each elementary symmetric function of the big
// alphabet with the matching one of the union of the two small alphabets,
// then cut by the idempotents of C, A and B. The result is the zero algebra
// exactly when C differs from the union of A and B as a multiset, or that
// union is not a multisubset of sigma.
FiniteAlgebra splitter_algebra(const RootMultiset& sigma, const RootMultiset& A,
                               const RootMultiset& B, const RootMultiset& C);

// The alternating sum over partitions alpha in the a x b box of
// (-1)^{ab-|alpha|} (Schur class of alpha) (x) (Schur class of its partner),
// taken inside the tensor product of the summands cut by A and by B,
// together with its exact inverse found by a linear solve. Throws Error when
// the element is not invertible, which happens exactly when A and B share a
// root.
struct SplitUnitInverse {
    FiniteAlgebra tensor;  // (summand of A) (x) (summand of B)
    AlgElt unit_elt;
    AlgElt inverse;
};

SplitUnitInverse split_unit_inverse(const RootMultiset& sigma, const RootMultiset& A,
                                    const RootMultiset& B);

} // namespace dlh
