#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dlh/cube.hpp"
#include "dlh/poly.hpp"
#include "dlh/polymat.hpp"
#include "dlh/symfn.hpp"
#include "dlh/unipoly.hpp"
#include "dlh/webs.hpp"

namespace dlh {

// ---------------------------------------------------------------------------
// Potential attached to a root multiset: Q with Q' = (N+1) P and Q(0) = 0,
// where P is the monic degree-N polynomial with the given roots. Q extends
// to alphabets through power sums, so on a two-element alphabet it is a
// polynomial in the elementary symmetric coordinates.
// ---------------------------------------------------------------------------
struct Potential {
    RootMultiset sigma;
    UniPoly P; // monic, degree N
    UniPoly Q; // (N+1) times the antiderivative of P, zero constant term

    static Potential make(const RootMultiset& sigma);
    int N() const { return P.degree(); }

    // Q(arg) for a polynomial argument.
    MultiPoly on_single(const MultiPoly& arg) const;
    // Q of a two-element alphabet whose elementary symmetric values are the
    // given polynomials.
    MultiPoly on_pair(const MultiPoly& e1, const MultiPoly& e2) const;
    // (Q(x) - Q(y)) / (x - y) over the given variable list; exact division.
    MultiPoly saddle_entry(const std::vector<std::string>& vars, int xi, int yi) const;
    // Telescoping coefficients (U1, U2) with
    //   U1 (a1 - b1) + U2 (a2 - b2) = Q{A} - Q{B}
    // for two-element alphabets with elementary coordinates A = (a1, a2)
    // and B = (b1, b2). Deterministic: the i-th coefficient divides out the
    // i-th coordinate step of the interpolation A -> B.
    std::array<MultiPoly, 2> pair_coeffs(const MultiPoly& a1, const MultiPoly& a2,
                                         const MultiPoly& b1, const MultiPoly& b2) const;
};

// ---------------------------------------------------------------------------
// Koszul matrix factorizations: a list of rows (a_r, b_r) over one variable
// list determines a Z/2-graded differential d on the free module with basis
// e_S indexed by row subsets S,
//   d e_S = sum_{r not in S} (-1)^{e(S,r)} a_r e_{S+r}
//         + sum_{r in S}     (-1)^{e(S,r)} b_r e_{S-r},
// where e(S,r) counts the rows of S below r. Then d^2 = w id with
// w = sum a_r b_r. Even part: subsets of even size.
// ---------------------------------------------------------------------------
struct KoszulRow {
    MultiPoly a, b;
};

// Subset-basis bookkeeping shared by the dense realizations: masks of even
// and of odd popcount, each listed in increasing mask order.
struct SubsetBasis {
    int nrows = 0;
    std::vector<long> even, odd;      // masks by parity
    std::vector<long> position;       // mask -> index inside its parity list
    static SubsetBasis make(int nrows);
    static int insert_sign(long mask, int r); // (-1)^{popcount below r}
};

struct TwoPeriodicComplex {
    std::vector<std::string> vars;
    PolyMat d0; // even -> odd
    PolyMat d1; // odd -> even
    long rank0() const { return d0.cols(); }
    long rank1() const { return d1.cols(); }
    // Verifies d1 d0 = w id and d0 d1 = w id exactly; throws CheckFailure.
    void verify_potential(const MultiPoly& w) const;
};

struct KoszulMF {
    std::vector<std::string> vars;
    std::vector<KoszulRow> rows;

    int nrows() const { return static_cast<int>(rows.size()); }
    long rank() const { return 1L << rows.size(); }
    MultiPoly potential() const; // sum a_r b_r
    TwoPeriodicComplex two_periodic() const;

    // Concatenation of row lists; both factors must share the variable
    // list. The potential adds.
    static KoszulMF tensor(const KoszulMF& x, const KoszulMF& y);
};

// Morphism of two-periodic complexes. Even: f0 : M0 -> M0', f1 : M1 -> M1'.
// Odd: f0 : M0 -> M1', f1 : M1 -> M0'.
struct MFMorphism {
    bool odd = false;
    PolyMat f0, f1;
};

// Exact chain-map test (even morphisms): d0' f0 == f1 d0 and d1' f1 == f0 d1.
bool is_chain_map(const MFMorphism& f, const TwoPeriodicComplex& src,
                  const TwoPeriodicComplex& dst);

// Decides F homotopic to G by solving F - G = d' H + H d linearly with all
// homotopy entries of total degree <= degree_bound; returns the homotopy
// (h0 : M0 -> M1', h1 : M1 -> M0') when one exists.
std::optional<std::pair<PolyMat, PolyMat>> homotopy_between(
    const MFMorphism& F, const MFMorphism& G, const TwoPeriodicComplex& src,
    const TwoPeriodicComplex& dst, int degree_bound);

// ---------------------------------------------------------------------------
// Web compiler: Koszul factorization of a web with edge labels in {1, 2}.
// Each edge carries one alphabet (a single variable for label 1, a pair of
// elementary coordinates for label 2); an edge running from boundary to
// boundary carries separate bottom and top alphabets joined by an identity
// row. Every trivalent vertex contributes rows
//   ( U_i , e_i(incoming) - e_i(outgoing) ),  i = 1, 2,
// with the telescoping U_i, so the total potential is Q(domain alphabets)
// minus Q(codomain alphabets); this is verified and a mismatch aborts.
// ---------------------------------------------------------------------------
KoszulMF web_to_mf(const Web& w, const RootMultiset& sigma);

// ---------------------------------------------------------------------------
// Crossing complexes. For one crossing with both strands labeled 1, bottom
// variables (x1, x2) and top variables (y1, y2), the two resolutions are
//   oriented: {(u(x1,y1); x1-y1), (u(x2,y2); x2-y2)}
//   wide:     {(V1; x1+x2-y1-y2), (V2; x1 x2 - y1 y2)}
// and the connecting morphism chi is an even morphism lifting the quotient
// map between the linear factorizations R/(oriented b's) and R/(wide b's):
// out of the oriented side it realizes multiplication by the transversal
// variable difference (the one-box column sum), into the oriented side it
// lifts the identity coset map. The lift is solved from its defining
// square by a bounded-degree linear ansatz: chain-map equations hold
// exactly, and the even corner entries agree with the coset target modulo
// the target ideal with solved multipliers. Positive sign: oriented in cube
// degree 0, wide in degree +1, chi : oriented -> wide. Negative sign: wide
// in degree -1, oriented in 0, chi : wide -> oriented.
// ---------------------------------------------------------------------------
struct CrossingMF {
    int sign = 1;
    std::vector<std::string> vars; // x1, x2, y1, y2
    KoszulMF oriented, wide;
    MFMorphism chi;
    int chi_degree = 0; // ansatz degree at which the solve succeeded
};

CrossingMF crossing_mf_complex(int sign, const RootMultiset& sigma);

// ---------------------------------------------------------------------------
// Variable exclusion: a row whose second entry is c (x - f) with rational
// c != 0, x a variable absent from f and from the total potential, can be
// removed after substituting x -> f in all other rows; this preserves the
// homotopy type. The step records the data of the standard contraction so
// morphisms can be transported through the reduction:
//   project p (drop the row, substitute entries) and include i (identity
//   plus one correction column into the deleted row's direction).
// Both p d = d' p, d i = i d' and p i = id are verified exactly per step.
// ---------------------------------------------------------------------------
struct ExclusionStep {
    int row = 0;                 // row index at the time of the step
    int var = 0;                 // excluded variable
    MultiPoly f;                 // substituted value, an x-free polynomial
    Rational unit;               // leading coefficient c of x in b_row
    PolyMat include;             // i : reduced full-rank basis -> old basis
};

struct ReducedMF {
    KoszulMF mf;                       // final rows, nothing excludable left
    std::vector<ExclusionStep> steps;  // in application order
};

// True when row r of m has an excludable second entry; reports the variable.
bool exclusion_candidate(const KoszulMF& m, int r, int* var_out);

// Applies one exclusion step to row r (must be excludable); returns the
// recorded step. Throws CheckFailure when the row is not excludable or an
// internal transport identity fails.
ExclusionStep exclude_row(KoszulMF& m, int r);

// Greedy full reduction; scans rows in ascending (or descending) order and
// repeats until no row is excludable.
ReducedMF exclude_all(KoszulMF m, bool reverse_scan = false);

// Transport of an even morphism through recorded reductions:
// chi' = p_dst ... p_dst chi i_src ... i_src as dense matrices on the
// reduced subset bases.
MFMorphism transport_morphism(const MFMorphism& chi, const ReducedMF& src,
                              const ReducedMF& dst);

// ---------------------------------------------------------------------------
// Free-module kernels over the polynomial ring, term-over-position order
// (grevlex on the monomial, then position). Scope: the small complexes left
// after exclusion.
// ---------------------------------------------------------------------------
using ModVec = std::vector<MultiPoly>; // one entry per free-module position

// Generators of { t : sum_j t_j g_j = 0 } for the given module elements,
// via Buchberger with representation tracking over the original list (all
// pairs processed, zero reductions collected, unit syzygies for zero
// generators included).
std::vector<ModVec> syzygy_generators(const std::vector<ModVec>& gens,
                                      const std::vector<std::string>& vars, int npos);

// Homology of free-module maps d_in : A -> B, d_out : B -> C at B, as a
// finite-dimensional rational vector space: kernel generators from
// syzygies, reduction mod the image submodule, and closure of the span
// under multiplication by the acting variables (after exclusion only the
// surviving variables act; an empty list means all of them).
// Representatives are kept in normal form so later maps can be expressed
// in coordinates.
struct ModuleHomology {
    long dim = 0;
    bool out_of_scale = false;       // closure failed to stabilize under cap
    std::vector<ModVec> basis;       // normal-form representatives
    std::vector<std::string> vars;
    int npos = 0;
    std::vector<ModVec> image_gb;    // Groebner list of the image submodule

    // Coordinates of v (reduced mod image) in the stored basis; throws
    // CheckFailure when v does not lie in the span.
    std::vector<Rational> coords(const ModVec& v) const;
};

ModuleHomology module_homology(const PolyMat& d_in, const PolyMat& d_out, long cap,
                               const std::vector<int>& act_vars = {});

// ---------------------------------------------------------------------------
// Closed-diagram homology. Builds one Koszul factorization per resolution
// cube vertex over slot variables (level, position), excludes variables
// exhaustively, takes two-periodic homology vertexwise, transports the
// crossing morphisms, and reports the homology of the induced complex per
// cube degree (popcount minus number of negative crossings). All internal
// identities (potential zero, exact transport, composite vanishing) are
// verified; violations throw CheckFailure.
// ---------------------------------------------------------------------------
struct MFHomologyReport {
    HomologyResult table;          // dims per homological degree
    long exclusion_steps = 0;      // total rows excluded across the cube
    long residual_ring_dim = 0;    // max over vertices of dim Q[vars]/(entries); -1 if infinite
    bool out_of_scale = false;
    std::string note;
};

MFHomologyReport closed_homology(const LinkDiagram& L, const RootMultiset& sigma,
                                 bool parallel = true);

// ---------------------------------------------------------------------------
// Quotient-ring identity checks: the web-category relations realized as
// finitely presented algebras (via the Groebner module) plus one
// factorization-level homotopy identity.
//   digon_cap_chain      the cup, k-fold dot, cap composite on a digon with
//                        legs labeled 1 and k returns the identity (k = 1, 2)
//   digon_map_difference the two saddle composites on a (1,1) digon differ
//                        by exactly the identity on the module basis {1, m}
//   square_transport     the two square-web composites move the left-leg
//                        variable to the opposite leg; their difference is
//                        the identity on the class of that variable
//   lr_box_symmetry      Littlewood-Richardson coefficients agree with the
//                        coefficients of box-complement conjugates
//   zip_unzip_decoration the composite of the two crossing morphisms is
//                        homotopic to multiplication by the transversal
//                        variable difference on either resolution
// ---------------------------------------------------------------------------
struct QRCheckReport {
    bool digon_cap_chain = false;
    bool digon_map_difference = false;
    bool square_transport = false;
    bool lr_box_symmetry = false;
    bool zip_unzip_decoration = false;
    std::string witness; // first failing identity, empty when all pass

    bool all() const {
        return digon_cap_chain && digon_map_difference && square_transport &&
               lr_box_symmetry && zip_unzip_decoration;
    }
};

QRCheckReport qr_identity_checks(const RootMultiset& sigma);

} // namespace dlh
