#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dlh/linalg.hpp"
#include "dlh/report.hpp"
#include "dlh/symfn.hpp"
#include "dlh/webs.hpp"

namespace dlh {

// Per homological degree: exact dimension over Q.
using HomologyResult = HomologyTable;

// Frobenius algebra A = Q[X]/P(X) for the monic quadratic with the two
// given roots, with trace eps(1) = 0, eps(X) = 1. The comultiplication is
// the one dual to multiplication under the trace pairing:
//   Delta(1) = 1(x)X + X(x)1 - e1 * 1(x)1,   Delta(X) = X(x)X - e2 * 1(x)1.
// Basis order {1, X} throughout.
struct FrobeniusData {
    RootMultiset sigma;
    Rational e1, e2;
    std::array<Rational, 2> counit;                              // eps(X^i)
    std::array<std::array<std::array<Rational, 2>, 2>, 2> mult;  // m(X^i,X^j)
    std::array<std::array<std::array<Rational, 2>, 2>, 2> comult; // Delta(X^i)

    static FrobeniusData make(const RootMultiset& sigma);
    // Commutativity, associativity, unit/counit laws, coassociativity, the
    // Frobenius compatibility (m(x)id)(id(x)Delta) = Delta m = (id(x)m)(Delta(x)id)
    // and nondegeneracy of eps(m(-,-)); throws CheckFailure on violation.
    void verify_axioms() const;
};

// One resolution of the braid closure: every crossing is replaced by its
// oriented or wide smoothing and the resulting circles are traced through
// the flat diagram. Circles are ordered by their smallest segment slot,
// where slot (level t, position p) has index t*strands + p.
struct Resolution {
    int circles = 0;
    std::vector<int> circle_of_slot;            // per (level, position) slot
    std::vector<std::array<int, 4>> corners;    // per crossing: circles at
                                                // [SW, SE, NW, NE]
    std::vector<int> component_of_circle;       // -1 unless the circle runs
                                                // through level 0
};

// v is a bitmask over crossings in word order; bit 0 selects the oriented
// smoothing of a positive crossing and the wide smoothing of a negative one.
Resolution resolve(const LinkDiagram& L, unsigned long v);

struct CubeVertex {
    unsigned long mask = 0;
    int degree = 0;
    Resolution res;
    long offset = 0; // of this vertex's group inside its degree block
};

struct CubeComplex {
    LinkDiagram link;
    FrobeniusData frob;
    int n_crossings = 0;
    int n_negative = 0;
    std::vector<CubeVertex> vertices;    // indexed by mask
    std::map<int, long> dim_per_degree;  // chain group dimensions
    std::map<int, RatMat> differential;  // d_i : C_i -> C_{i+1}

    std::string str() const;
};

// Builds the cube complex of a 1-labeled closed diagram over Q[X]/P with
// P quadratic (two roots). d^2 = 0 is verified exactly; a failure aborts.
CubeComplex build_complex(const LinkDiagram& L, const RootMultiset& sigma,
                          bool parallel = true);

// Exact ranks by rational row reduction.
HomologyResult homology(const CubeComplex& C);

// One direct summand of the complex after the per-circle change to the
// idempotent basis {1_lambda, 1_mu}: a connected family of (vertex, circle
// coloring) pairs. A piece is consistent when at every vertex the two local
// strands of every crossing lie on circles carrying distinct roots; in the
// saddle calculus the root is conjugated each time a strand passes a
// crossing, so this is the cube-level shadow of a coloring of link
// components. `coloring` records, per component, the root its basepoint
// segment (level 0, smallest strand) carries throughout the piece.
struct ColoredPiece {
    bool consistent = false;
    std::vector<Rational> coloring; // per link component, basepoint root
    std::map<int, long> dim_per_degree;
    HomologyResult homology;
    long total = 0;
};

struct SplitResult {
    std::vector<ColoredPiece> pieces; // consistent pieces first
    long total = 0;                   // sum of homology totals
    long consistent_count = 0;
};

// Requires two distinct roots; throws Error otherwise. Verifies that the
// consistent pieces number 2^components with pairwise distinct basepoint
// colorings and one-dimensional homology each, and that the inconsistent
// pieces are acyclic; any violation throws CheckFailure.
SplitResult split_by_coloring(const CubeComplex& C);

} // namespace dlh
