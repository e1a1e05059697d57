#include "dlh/cube.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "dlh/error.hpp"
#include "dlh/parallel.hpp"

namespace dlh {

// ---------------------------------------------------------------------------
// Frobenius data
// ---------------------------------------------------------------------------

FrobeniusData FrobeniusData::make(const RootMultiset& s) {
    if (s.size() != 2) throw Error("the resolution-cube engine needs exactly two roots");
    FrobeniusData f;
    f.sigma = s;
    f.e1 = s.elementary(1);
    f.e2 = s.elementary(2);
    f.counit = {Rational(0), Rational(1)};
    auto zero2 = std::array<Rational, 2>{Rational(0), Rational(0)};
    for (auto& row : f.mult)
        for (auto& cell : row) cell = zero2;
    for (auto& row : f.comult)
        for (auto& cell : row) cell = zero2;
    // m(X^i, X^j) with X^2 = e1 X - e2
    f.mult[0][0] = {Rational(1), Rational(0)};
    f.mult[0][1] = {Rational(0), Rational(1)};
    f.mult[1][0] = {Rational(0), Rational(1)};
    f.mult[1][1] = {-f.e2, f.e1};
    // Delta(1) = 1(x)X + X(x)1 - e1 1(x)1, Delta(X) = X(x)X - e2 1(x)1
    f.comult[0][0][1] = Rational(1);
    f.comult[0][1][0] = Rational(1);
    f.comult[0][0][0] = -f.e1;
    f.comult[1][1][1] = Rational(1);
    f.comult[1][0][0] = -f.e2;
    f.verify_axioms();
    return f;
}

void FrobeniusData::verify_axioms() const {
    auto fail = [](const std::string& what) { throw CheckFailure("Frobenius axiom: " + what); };
    using Elt = std::array<Rational, 2>;
    using Tens2 = std::array<std::array<Rational, 2>, 2>;
    auto mul = [&](const Elt& u, const Elt& v) {
        Elt out{Rational(0), Rational(0)};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) out[k] += u[i] * v[j] * mult[i][j][k];
        return out;
    };
    auto delta = [&](const Elt& u) {
        Tens2 out{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) out[j][k] += u[i] * comult[i][j][k];
        return out;
    };
    const Elt one{Rational(1), Rational(0)};
    const Elt X{Rational(0), Rational(1)};
    const std::array<Elt, 2> basis{one, X};

    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (mult[i][j] != mult[j][i]) fail("commutativity");
            if (mul(one, basis[j]) != basis[j]) fail("unit law");
            for (int k = 0; k < 2; ++k)
                if (mul(mul(basis[i], basis[j]), basis[k]) !=
                    mul(basis[i], mul(basis[j], basis[k])))
                    fail("associativity");
        }
        // counit laws
        Elt left{Rational(0), Rational(0)}, right{Rational(0), Rational(0)};
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                left[k] += counit[j] * comult[i][j][k];
                right[j] += counit[k] * comult[i][j][k];
            }
        if (left != basis[i] || right != basis[i]) fail("counit law");
        // coassociativity
        Rational lhs[2][2][2] = {}, rhs[2][2][2] = {};
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q) {
                        lhs[p][q][k] += comult[i][j][k] * comult[j][p][q];
                        rhs[j][p][q] += comult[i][j][k] * comult[k][p][q];
                    }
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
                for (int k = 0; k < 2; ++k)
                    if (lhs[p][q][k] != rhs[p][q][k]) fail("coassociativity");
    }

    // (m (x) id)(id (x) Delta) = Delta m = (id (x) m)(Delta (x) id) on basis pairs
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Tens2 middle = delta(mul(basis[i], basis[j]));
            Tens2 left{}, right{};
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q)
                    for (int m2 = 0; m2 < 2; ++m2) {
                        // id (x) Delta on X^i (x) X^j, then m (x) id
                        left[m2][q] += comult[j][p][q] * mult[i][p][m2];
                        // Delta (x) id on X^i (x) X^j, then id (x) m
                        right[p][m2] += comult[i][p][q] * mult[q][j][m2];
                    }
            if (left != middle || right != middle) fail("compatibility of m and Delta");
        }

    // nondegeneracy of eps(m(-,-))
    RatMat pairing(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) pairing.at(i, j) += mult[i][j][k] * counit[k];
    if (rank(pairing) != 2) fail("trace pairing degenerate");
}

// ---------------------------------------------------------------------------
// Resolutions
// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int x, int y) { parent[find(x)] = find(y); }
};

} // namespace

Resolution resolve(const LinkDiagram& L, unsigned long v) {
    const int m = L.strands;
    const int n = static_cast<int>(L.word.size());
    auto slot = [m](int level, int p) { return level * m + p; };
    UnionFind uf((n + 1) * m);
    for (int p = 0; p < m; ++p) uf.unite(slot(n, p), slot(0, p));
    for (int t = 0; t < n; ++t) {
        const int i = std::abs(L.word[t]) - 1;
        for (int p = 0; p < m; ++p)
            if (p != i && p != i + 1) uf.unite(slot(t, p), slot(t + 1, p));
        const bool positive = L.word[t] > 0;
        const bool bit = (v >> t) & 1UL;
        const bool oriented = positive ? !bit : bit;
        if (oriented) {
            uf.unite(slot(t, i), slot(t + 1, i));
            uf.unite(slot(t, i + 1), slot(t + 1, i + 1));
        } else {
            uf.unite(slot(t, i), slot(t, i + 1));
            uf.unite(slot(t + 1, i), slot(t + 1, i + 1));
        }
    }

    Resolution r;
    const int total = (n + 1) * m;
    r.circle_of_slot.assign(total, -1);
    std::map<int, int> root_to_circle;
    for (int s = 0; s < total; ++s) {
        const int root = uf.find(s);
        auto it = root_to_circle.find(root);
        if (it == root_to_circle.end())
            it = root_to_circle.emplace(root, r.circles++).first;
        r.circle_of_slot[s] = it->second;
    }
    for (int t = 0; t < n; ++t) {
        const int i = std::abs(L.word[t]) - 1;
        r.corners.push_back({r.circle_of_slot[slot(t, i)], r.circle_of_slot[slot(t, i + 1)],
                             r.circle_of_slot[slot(t + 1, i)],
                             r.circle_of_slot[slot(t + 1, i + 1)]});
    }
    r.component_of_circle.assign(r.circles, -1);
    for (int p = 0; p < m; ++p)
        r.component_of_circle[r.circle_of_slot[slot(0, p)]] = L.component_of[p];
    return r;
}

// ---------------------------------------------------------------------------
// Cube complex
// ---------------------------------------------------------------------------

namespace {

struct SaddleData {
    bool is_merge = false;
    int z1 = -1, z2 = -1; // merging circles in the source (merge case)
    int z = -1;           // splitting circle (split case)
    int r = -1;           // merged target circle
    int r1 = -1, r2 = -1; // split target circles
    std::vector<int> map; // source circle -> target circle, affected included
};

SaddleData saddle_data(const Resolution& rv, const Resolution& ru, int c) {
    SaddleData s;
    std::vector<int> av, au;
    for (int x : rv.corners[c])
        if (std::find(av.begin(), av.end(), x) == av.end()) av.push_back(x);
    for (int x : ru.corners[c])
        if (std::find(au.begin(), au.end(), x) == au.end()) au.push_back(x);
    std::sort(av.begin(), av.end());
    std::sort(au.begin(), au.end());
    if (av.size() == 2 && au.size() == 1) {
        s.is_merge = true;
        s.z1 = av[0];
        s.z2 = av[1];
        s.r = au[0];
    } else if (av.size() == 1 && au.size() == 2) {
        s.is_merge = false;
        s.z = av[0];
        s.r1 = au[0];
        s.r2 = au[1];
    } else {
        throw CheckFailure("saddle does not change the circle count by one");
    }
    if (rv.circles - ru.circles != (s.is_merge ? 1 : -1))
        throw CheckFailure("saddle circle counts inconsistent");
    // unaffected circles keep their slot sets
    std::vector<int> first_slot(rv.circles, -1);
    for (int sl = static_cast<int>(rv.circle_of_slot.size()) - 1; sl >= 0; --sl)
        first_slot[rv.circle_of_slot[sl]] = sl;
    s.map.assign(rv.circles, -1);
    for (int k = 0; k < rv.circles; ++k) {
        if (s.is_merge && (k == s.z1 || k == s.z2)) s.map[k] = s.r;
        else if (!s.is_merge && k == s.z) s.map[k] = -1;
        else s.map[k] = ru.circle_of_slot[first_slot[k]];
    }
    return s;
}

} // namespace

std::string CubeComplex::str() const {
    std::ostringstream os;
    os << "cube over " << (link.name.empty() ? link.braid_text() : link.name) << ", sigma {"
       << frob.sigma.str() << "}: chain dims";
    for (const auto& [d, dim] : dim_per_degree) os << " [" << d << "]:" << dim;
    return os.str();
}

CubeComplex build_complex(const LinkDiagram& L, const RootMultiset& sigma, bool parallel) {
    CubeComplex C;
    C.link = L;
    if (static_cast<int>(C.link.component_of.size()) != C.link.strands) C.link.analyze();
    if (!C.link.closed) throw Error("only closed diagrams are supported");
    for (int lab : C.link.labels)
        if (lab != 1) throw Error("the resolution-cube engine needs all labels equal to 1");
    C.frob = FrobeniusData::make(sigma);
    C.n_crossings = static_cast<int>(C.link.word.size());
    if (C.n_crossings > 24) throw Error("too many crossings for the cube engine");
    for (int w : C.link.word)
        if (w < 0) C.n_negative++;

    const unsigned long total = 1UL << C.n_crossings;
    C.vertices.assign(total, CubeVertex{});
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t mask) {
        CubeVertex& cv = C.vertices[mask];
        cv.mask = mask;
        cv.degree = __builtin_popcountl(mask) - C.n_negative;
        cv.res = resolve(C.link, mask);
    }, parallel);
    for (auto& cv : C.vertices) {
        cv.offset = C.dim_per_degree[cv.degree];
        C.dim_per_degree[cv.degree] += 1L << cv.res.circles;
    }

    for (const auto& [d, dim] : C.dim_per_degree) {
        auto next = C.dim_per_degree.find(d + 1);
        if (next != C.dim_per_degree.end())
            C.differential.emplace(d, RatMat(static_cast<int>(next->second), static_cast<int>(dim)));
    }

    parallel_for(static_cast<std::size_t>(total), [&](std::size_t mask) {
        const CubeVertex& cv = C.vertices[mask];
        for (int c = 0; c < C.n_crossings; ++c) {
            if ((mask >> c) & 1UL) continue;
            const unsigned long umask = mask | (1UL << c);
            const CubeVertex& cu = C.vertices[umask];
            const SaddleData s = saddle_data(cv.res, cu.res, c);
            const int sgn = __builtin_popcountl(mask & ((1UL << c) - 1)) % 2 ? -1 : 1;
            RatMat& D = C.differential.at(cv.degree);
            const long nb = 1L << cv.res.circles;
            for (long b = 0; b < nb; ++b) {
                long carried = 0;
                for (int k = 0; k < cv.res.circles; ++k) {
                    if (s.is_merge ? (k == s.z1 || k == s.z2) : (k == s.z)) continue;
                    if ((b >> k) & 1L) carried |= 1L << s.map[k];
                }
                if (s.is_merge) {
                    const int i1 = (b >> s.z1) & 1L, i2 = (b >> s.z2) & 1L;
                    for (int j = 0; j < 2; ++j) {
                        const Rational& coeff = C.frob.mult[i1][i2][j];
                        if (coeff == Rational(0)) continue;
                        const long tb = carried | (static_cast<long>(j) << s.r);
                        D.at(static_cast<int>(cu.offset + tb), static_cast<int>(cv.offset + b)) +=
                            Rational(sgn) * coeff;
                    }
                } else {
                    const int i = (b >> s.z) & 1L;
                    for (int j = 0; j < 2; ++j)
                        for (int k2 = 0; k2 < 2; ++k2) {
                            const Rational& coeff = C.frob.comult[i][j][k2];
                            if (coeff == Rational(0)) continue;
                            const long tb = carried | (static_cast<long>(j) << s.r1) |
                                            (static_cast<long>(k2) << s.r2);
                            D.at(static_cast<int>(cu.offset + tb), static_cast<int>(cv.offset + b)) +=
                                Rational(sgn) * coeff;
                        }
                }
            }
        }
    }, parallel);

    for (const auto& [d, D] : C.differential) {
        auto up = C.differential.find(d + 1);
        if (up == C.differential.end()) continue;
        if (!(up->second * D).is_zero())
            throw CheckFailure("cube differential does not square to zero at degree " +
                               std::to_string(d));
    }
    return C;
}

HomologyResult homology(const CubeComplex& C) {
    std::map<int, int> ranks;
    for (const auto& [d, D] : C.differential) ranks[d] = rank(D);
    HomologyResult H;
    for (const auto& [d, dim] : C.dim_per_degree) {
        long h = dim;
        if (ranks.count(d)) h -= ranks[d];
        if (ranks.count(d - 1)) h -= ranks[d - 1];
        if (h < 0) throw CheckFailure("negative homology dimension");
        if (h > 0) H.add(d, h);
    }
    return H;
}

// ---------------------------------------------------------------------------
// Idempotent splitting
// ---------------------------------------------------------------------------

SplitResult split_by_coloring(const CubeComplex& C) {
    if (C.frob.sigma.num_distinct() != 2)
        throw Error("idempotent splitting needs two distinct roots");
    const Rational r0 = C.frob.sigma.distinct()[0];
    const Rational r1 = C.frob.sigma.distinct()[1];

    // node = base[mask] + coloring bits (bit k set: circle k gets r1)
    const unsigned long nverts = C.vertices.size();
    std::vector<long> base(nverts + 1, 0);
    for (unsigned long m = 0; m < nverts; ++m)
        base[m + 1] = base[m] + (1L << C.vertices[m].res.circles);
    UnionFind uf(static_cast<int>(base[nverts]));

    struct Arrow {
        long from, to;
        Rational coeff;
        int degree;
    };
    std::vector<Arrow> arrows;
    for (unsigned long mask = 0; mask < nverts; ++mask) {
        const CubeVertex& cv = C.vertices[mask];
        for (int c = 0; c < C.n_crossings; ++c) {
            if ((mask >> c) & 1UL) continue;
            const unsigned long umask = mask | (1UL << c);
            const CubeVertex& cu = C.vertices[umask];
            const SaddleData s = saddle_data(cv.res, cu.res, c);
            const int sgn = __builtin_popcountl(mask & ((1UL << c) - 1)) % 2 ? -1 : 1;
            const long nb = 1L << cv.res.circles;
            for (long b = 0; b < nb; ++b) {
                long carried = 0;
                for (int k = 0; k < cv.res.circles; ++k) {
                    if (s.is_merge ? (k == s.z1 || k == s.z2) : (k == s.z)) continue;
                    if ((b >> k) & 1L) carried |= 1L << s.map[k];
                }
                Arrow a;
                a.from = base[mask] + b;
                a.degree = cv.degree;
                if (s.is_merge) {
                    const int i1 = (b >> s.z1) & 1L, i2 = (b >> s.z2) & 1L;
                    if (i1 != i2) continue; // orthogonal idempotents
                    a.to = base[umask] + (carried | (static_cast<long>(i1) << s.r));
                    a.coeff = Rational(sgn);
                } else {
                    const int i = (b >> s.z) & 1L;
                    a.to = base[umask] + (carried | (static_cast<long>(i) << s.r1) |
                                          (static_cast<long>(i) << s.r2));
                    a.coeff = Rational(sgn) * (i == 0 ? r0 - r1 : r1 - r0);
                }
                uf.unite(static_cast<int>(a.from), static_cast<int>(a.to));
                arrows.push_back(a);
            }
        }
    }

    std::map<int, std::vector<long>> members; // component root -> node list
    for (long node = 0; node < base[nverts]; ++node)
        members[uf.find(static_cast<int>(node))].push_back(node);
    std::map<long, std::vector<Arrow>> arrows_of;
    for (const auto& a : arrows) arrows_of[uf.find(static_cast<int>(a.from))].push_back(a);

    auto mask_of_node = [&](long node) {
        return static_cast<unsigned long>(std::upper_bound(base.begin(), base.end(), node) -
                                          base.begin() - 1);
    };
    auto degree_of_node = [&](long node) { return C.vertices[mask_of_node(node)].degree; };

    // At a crossing the strand entering at the lower-left corner leaves at the
    // upper-right one; in either smoothing the two local arcs carry distinct
    // roots exactly when those diagonal corners do.
    auto node_proper = [&](long node) {
        const unsigned long mask = mask_of_node(node);
        const long kappa = node - base[mask];
        for (const auto& corner : C.vertices[mask].res.corners)
            if (((kappa >> corner[0]) & 1L) == ((kappa >> corner[3]) & 1L)) return false;
        return true;
    };

    std::vector<int> basepoint_circle_slot(C.link.n_components, -1);
    for (int p = C.link.strands - 1; p >= 0; --p)
        basepoint_circle_slot[C.link.component_of[p]] = p;

    SplitResult out;
    for (auto& [root, nodes] : members) {
        ColoredPiece piece;
        std::map<int, std::map<long, int>> index; // degree -> node -> column
        for (long node : nodes) {
            const int d = degree_of_node(node);
            const int idx = static_cast<int>(index[d].size());
            index[d][node] = idx;
            piece.dim_per_degree[d]++;
        }
        std::map<int, RatMat> diff;
        for (const auto& [d, dim] : piece.dim_per_degree)
            if (piece.dim_per_degree.count(d + 1))
                diff.emplace(d, RatMat(static_cast<int>(piece.dim_per_degree[d + 1]),
                                       static_cast<int>(dim)));
        for (const auto& a : arrows_of[root])
            diff.at(a.degree).at(index[a.degree + 1][a.to], index[a.degree][a.from]) = a.coeff;
        std::map<int, int> ranks;
        for (const auto& [d, D] : diff) ranks[d] = rank(D);
        for (const auto& [d, dim] : piece.dim_per_degree) {
            long h = dim;
            if (ranks.count(d)) h -= ranks[d];
            if (ranks.count(d - 1)) h -= ranks[d - 1];
            if (h > 0) piece.homology.add(d, h);
        }
        piece.total = piece.homology.total();

        piece.consistent = std::all_of(nodes.begin(), nodes.end(), node_proper);
        {
            // segment roots are piece-wide constants, so any node will do
            const unsigned long mask = mask_of_node(nodes.front());
            const long kappa = nodes.front() - base[mask];
            const Resolution& res = C.vertices[mask].res;
            for (int p : basepoint_circle_slot) {
                const int bit = static_cast<int>((kappa >> res.circle_of_slot[p]) & 1L);
                piece.coloring.push_back(bit == 1 ? r1 : r0);
            }
        }
        if (piece.consistent && piece.total != 1)
            throw CheckFailure("consistent coloring without a single generator");
        if (!piece.consistent && piece.total != 0)
            throw CheckFailure("inconsistent coloring with nonzero homology");
        out.total += piece.total;
        if (piece.consistent) out.consistent_count++;
        out.pieces.push_back(std::move(piece));
    }
    if (out.consistent_count != (1L << C.link.n_components))
        throw CheckFailure("consistent colorings do not biject with root colorings");
    {
        std::set<std::vector<std::string>> seen;
        for (const auto& p : out.pieces) {
            if (!p.consistent) continue;
            std::vector<std::string> key;
            for (const auto& r : p.coloring) key.push_back(r.str());
            if (!seen.insert(key).second)
                throw CheckFailure("two consistent colorings share a basepoint labeling");
        }
    }
    std::stable_sort(out.pieces.begin(), out.pieces.end(),
                     [](const ColoredPiece& a, const ColoredPiece& b) {
                         return a.consistent > b.consistent;
                     });
    return out;
}

} // namespace dlh
