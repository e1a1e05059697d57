#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlh/report.hpp"
#include "dlh/symfn.hpp"

namespace dlh {

// ---------------------------------------------------------------------------
// Webs: directed trivalent graphs with edge labels in {0..max_label}.
// Every internal vertex is either a merge (two in, one out) or a split
// (one in, two out) and conserves the label flow. Edges with endpoint -1
// attach to the boundary; `domain` lists the incoming boundary edges and
// `codomain` the outgoing ones, each in left-to-right order.
// ---------------------------------------------------------------------------

struct WebVertex {
    bool is_split = false; // false: merge a+b -> c, true: split c -> a+b
};

struct WebEdge {
    int tail = -1; // source vertex, -1 for a domain boundary edge
    int head = -1; // target vertex, -1 for a codomain boundary edge
    int label = 0;
};

struct Web {
    int max_label = 0; // ambient N; labels above it mark the zero object
    std::vector<WebVertex> vertices;
    std::vector<WebEdge> edges;
    std::vector<int> domain;   // edge indices with tail == -1
    std::vector<int> codomain; // edge indices with head == -1

    int add_vertex(bool is_split);
    int add_edge(int tail, int head, int label);

    std::vector<int> domain_labels() const;
    std::vector<int> codomain_labels() const;
    bool closed() const { return domain.empty() && codomain.empty(); }
    // True when some edge label exceeds max_label, which makes the web the
    // zero object.
    bool overflows() const;

    // Checks trivalence, flow conservation at every vertex and boundary
    // consistency; throws CheckFailure with a witness on violation.
    void validate() const;

    // Copy with all 0-labeled edges removed and the resulting two-valent
    // vertices smoothed away. Edge and vertex indices are not preserved.
    Web erased() const;

    std::string str() const;
};

// Square web W_k sitting in the crossing complex of a pair of strands
// labeled (a, b) read left to right at the bottom; the top reads (b, a).
// The two columns are connected by a lower rung carrying |a-b|+k away from
// the thicker incoming side and an upper rung carrying k back. Edge order:
// 0 bottom-left (a), 1 bottom-right (b), 2 top-left (b), 3 top-right (a),
// 4 middle-left, 5 middle-right, 6 lower rung, 7 upper rung. Zero-labeled
// edges are kept; call erased() to drop them.
Web square_web(int max_label, int a, int b, int k);

// Multisubset coloring of a web: one multiset of roots per edge, of size
// equal to the edge label, with the thick color at each vertex equal to the
// multiset union of the two thin ones.
struct ColoredWeb {
    Web web;
    std::vector<RootMultiset> colors; // aligned with web.edges

    // True when every color has the right size and every vertex is
    // admissible; inadmissible colorings represent the zero object.
    bool admissible() const;
};

// All admissible colorings by multisubsets of sigma that extend the given
// partial assignment (edge index -> color). Propagates vertex constraints
// and branches only where forced choices run out; deterministic order.
std::vector<std::vector<RootMultiset>> web_colorings(
    const Web& w, const RootMultiset& sigma,
    const std::map<int, RootMultiset>& fixed = {});

// ---------------------------------------------------------------------------
// Link diagrams: labeled braid closures.
// ---------------------------------------------------------------------------

// Crossing read off the braid word: letter `index` acts at positions
// (pos, pos+1); strand/label/component data describe the two strands just
// below the crossing, left one first.
struct CrossingSite {
    int index = 0;
    int pos = 0; // 1-based
    int sign = 0;
    int strand_left = 0, strand_right = 0; // bottom positions of origin
    int label_left = 0, label_right = 0;
    int comp_left = 0, comp_right = 0;
};

struct LinkDiagram {
    int strands = 0;
    std::vector<int> labels; // per bottom position
    std::vector<int> word;   // letter i means sigma_i, -i its inverse
    bool closed = true;
    std::string name;

    // Derived by analyze(); component ids follow the smallest bottom
    // position on each cycle of the braid permutation.
    int n_components = 0;
    std::vector<int> component_of;     // bottom position -> component
    std::vector<int> component_labels; // per component
    std::vector<int> self_writhe;      // signs of same-component crossings
    int total_writhe = 0;

    void analyze(); // fills the derived fields, validates label constancy
    std::vector<CrossingSite> crossing_sites() const;
    std::string braid_text() const;
};

LinkDiagram make_diagram(int strands, std::vector<int> labels,
                         std::vector<int> word, std::string name = "");

// Built-in diagrams: "unknot" (one strand, empty word), "hopf" (s1 s1),
// "trefoil" (s1 s1 s1), "figure-eight" (s1 s2' s1 s2'). Every component
// gets the given label.
LinkDiagram standard_link(const std::string& name, int label = 1);
std::vector<std::string> standard_link_names();

// Parses `braid: 2; labels: 1,1; word: 1 1` with fields separated by `;`
// or newlines; an optional `name:` field is accepted.
LinkDiagram parse_braid(const std::string& text);

// Sublink spanned by the kept components: other strands are removed from
// the closure and crossings involving them are forgotten.
LinkDiagram delete_components(const LinkDiagram& L, const std::vector<int>& keep);

// ---------------------------------------------------------------------------
// Crossing complexes: formal complexes of square webs whose differentials
// move one rung unit and carry a thickness-1 cap or cup with a decoration
// exponent. Only the data consumed downstream is stored.
// ---------------------------------------------------------------------------

struct FoamSymbol {
    int crossing = -1; // site index inside a diagram, -1 when standalone
    bool cap = false;  // cap: k -> k-1 (negative side), cup: k -> k+1
    int from_k = 0;
    int to_k = 0;
    int decoration = 0; // exponent of the thickness-1 decoration
    std::string str() const;
};

struct CrossingTerm {
    int k = 0;
    int degree = 0; // homological degree of this term
    Web web;
    bool zero = false; // true when the web overflows max_label
};

// For a positive crossing the terms are W_0 .. W_min in degrees 0..min with
// cup differentials; for a negative crossing W_min .. W_0 in degrees
// -min..0 with cap differentials. This normalization gives local degrees
// {0,1} resp. {-1,0} at a=b=1 and matches the resolution-cube convention
// |v| - (number of negative crossings).
struct CrossingComplex {
    int a = 0, b = 0, sign = 0;
    int min_ab = 0;
    std::vector<CrossingTerm> terms; // position i has degree terms[i].degree
    std::vector<FoamSymbol> diffs;   // diffs[i] : terms[i] -> terms[i+1]
};

CrossingComplex crossing_complex(int max_label, int a, int b, int sign);

// ---------------------------------------------------------------------------
// Diagram complexes: the tensor product over all crossings of their
// crossing complexes, with objects the closed webs obtained by patching the
// chosen square webs into the braid closure. Each closure arc of an
// a-labeled strand passes through an auxiliary max_label-labeled edge so
// that every object is a closed ladder-style web.
// ---------------------------------------------------------------------------

struct DiagramVertex {
    std::vector<int> v; // v[c] = homological step of crossing c, 0..min_c
    int degree = 0;
    Web web;
    bool zero = false;
};

struct DiagramEdge {
    long from = 0, to = 0; // vertex indices
    int crossing = 0;
    FoamSymbol symbol;
    int sign = 1; // Koszul sign of the tensor differential
};

struct DiagramComplex {
    int max_label = 0;
    LinkDiagram link;
    std::vector<int> radix;                // min_c + 1 per crossing
    std::vector<DiagramVertex> vertices;   // mixed-radix counter order,
                                           // last crossing fastest
    std::vector<DiagramEdge> edges;
    std::map<int, long> objects_per_degree;

    long vertex_index(const std::vector<int>& v) const;

    // Verifies that the Koszul signs of every tensor square cancel. Squares
    // that step the same crossing twice compose foam symbols on one digon
    // chain and are zero by the complex axiom of the source crossing
    // complex; they are counted, not expanded. Throws CheckFailure on a
    // sign defect and returns the number of axiom-zero squares.
    long check_d2() const;

    std::string str() const;
};

DiagramComplex diagram_complex(int max_label, const LinkDiagram& L,
                               bool parallel = true);

// ---------------------------------------------------------------------------
// Coloring enumeration and the decomposition predictor.
// ---------------------------------------------------------------------------

// One coloring assigns each component a multisubset of sigma of size equal
// to the component label; the list runs over all such assignments, last
// component fastest.
using ComponentColoring = std::vector<RootMultiset>;
std::vector<ComponentColoring> enumerate_colorings(const LinkDiagram& L,
                                                   const RootMultiset& sigma);

// Table of undeformed homology sizes keyed by (N, link id, sorted labels).
// Entries may carry the degree profile as a multiset of homological
// degrees. JSON shape: {"entries": [{"N":2, "id":"trefoil", "labels":[1],
// "total_dim":4, "degrees":[0,2,2,3]}, ...]} with "degrees" optional.
struct TableEntry {
    long total_dim = 0;
    std::optional<HomologyTable> degrees;
};

class UndeformedTable {
public:
    static std::string key(int N, const std::string& id, std::vector<int> labels);
    void add(int N, const std::string& id, std::vector<int> labels, TableEntry e);
    std::optional<TableEntry> lookup(int N, const std::string& id,
                                     std::vector<int> labels) const;
    static UndeformedTable from_json(const std::string& text);
    std::string to_json() const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, TableEntry> entries_;
};

// One predicted direct summand per coloring: the product over distinct
// roots lambda of the undeformed sl(N_lambda) homology of the sublink of
// components whose color contains lambda with multiplicity strictly
// between 0 and N_lambda, relabeled by those multiplicities. Degree
// profiles are convolutions and are only defined up to one overall
// translation per summand.
struct PredictedSummand {
    ComponentColoring coloring;
    long dim = 1;
    std::optional<HomologyTable> profile;
    std::vector<std::string> factors; // human-readable, one per distinct root
};

struct Prediction {
    std::vector<PredictedSummand> summands;
    long total = 0;
    std::optional<long> euler; // set when every factor has a degree profile
    std::string str() const;
};

// Throws Error when a needed table entry is missing. Sublinks of the input
// diagram are identified by deleting strands from the braid; the id of a
// proper sublink is the built-in name when the reduced braid matches one,
// and its braid text otherwise.
Prediction predict_decomposition(const LinkDiagram& L, const RootMultiset& sigma,
                                 const UndeformedTable& table);

} // namespace dlh
