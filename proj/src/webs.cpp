#include "dlh/webs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "dlh/error.hpp"
#include "dlh/parallel.hpp"
#include "json.hpp"

namespace dlh {

// ---------------------------------------------------------------------------
// Web
// ---------------------------------------------------------------------------

int Web::add_vertex(bool is_split) {
    vertices.push_back(WebVertex{is_split});
    return static_cast<int>(vertices.size()) - 1;
}

int Web::add_edge(int tail, int head, int label) {
    edges.push_back(WebEdge{tail, head, label});
    return static_cast<int>(edges.size()) - 1;
}

std::vector<int> Web::domain_labels() const {
    std::vector<int> out;
    for (int e : domain) out.push_back(edges[e].label);
    return out;
}

std::vector<int> Web::codomain_labels() const {
    std::vector<int> out;
    for (int e : codomain) out.push_back(edges[e].label);
    return out;
}

bool Web::overflows() const {
    for (const auto& e : edges)
        if (e.label > max_label) return true;
    return false;
}

void Web::validate() const {
    const int nv = static_cast<int>(vertices.size());
    const int ne = static_cast<int>(edges.size());
    std::vector<int> ins(nv, 0), outs(nv, 0), in_sum(nv, 0), out_sum(nv, 0);
    for (int i = 0; i < ne; ++i) {
        const auto& e = edges[i];
        if (e.label < 0) throw CheckFailure("web edge " + std::to_string(i) + " has negative label");
        if (e.tail < -1 || e.tail >= nv || e.head < -1 || e.head >= nv)
            throw CheckFailure("web edge " + std::to_string(i) + " has a bad endpoint");
        if (e.tail >= 0) { outs[e.tail]++; out_sum[e.tail] += e.label; }
        if (e.head >= 0) { ins[e.head]++; in_sum[e.head] += e.label; }
    }
    for (int v = 0; v < nv; ++v) {
        const bool split = vertices[v].is_split;
        if (ins[v] != (split ? 1 : 2) || outs[v] != (split ? 2 : 1))
            throw CheckFailure("web vertex " + std::to_string(v) + " is not trivalent of its type");
        if (in_sum[v] != out_sum[v])
            throw CheckFailure("flow not conserved at web vertex " + std::to_string(v));
    }
    std::vector<int> dom_count(ne, 0), cod_count(ne, 0);
    for (int e : domain) {
        if (e < 0 || e >= ne || edges[e].tail != -1)
            throw CheckFailure("domain lists edge " + std::to_string(e) + " with an internal tail");
        dom_count[e]++;
    }
    for (int e : codomain) {
        if (e < 0 || e >= ne || edges[e].head != -1)
            throw CheckFailure("codomain lists edge " + std::to_string(e) + " with an internal head");
        cod_count[e]++;
    }
    for (int i = 0; i < ne; ++i) {
        if ((edges[i].tail == -1) != (dom_count[i] == 1))
            throw CheckFailure("edge " + std::to_string(i) + " disagrees with the domain list");
        if ((edges[i].head == -1) != (cod_count[i] == 1))
            throw CheckFailure("edge " + std::to_string(i) + " disagrees with the codomain list");
    }
}

Web Web::erased() const {
    Web w = *this;
    const int nv = static_cast<int>(w.vertices.size());
    std::vector<bool> edge_dead(w.edges.size(), false);
    std::vector<bool> vertex_dead(nv, false);
    std::vector<int> absorbed_into(w.edges.size(), -1);
    for (std::size_t i = 0; i < w.edges.size(); ++i)
        if (w.edges[i].label == 0) edge_dead[i] = true;

    bool progress = true;
    while (progress) {
        progress = false;
        for (int v = 0; v < nv; ++v) {
            if (vertex_dead[v]) continue;
            int e_in = -1, e_out = -1, ins = 0, outs = 0;
            for (std::size_t i = 0; i < w.edges.size(); ++i) {
                if (edge_dead[i]) continue;
                if (w.edges[i].head == v) { ins++; e_in = static_cast<int>(i); }
                if (w.edges[i].tail == v) { outs++; e_out = static_cast<int>(i); }
            }
            if (ins + outs == 0) {
                vertex_dead[v] = true;
                progress = true;
            } else if (ins == 1 && outs == 1) {
                if (e_in == e_out) throw CheckFailure("erasing a zero edge left a free circle");
                if (w.edges[e_in].label != w.edges[e_out].label)
                    throw CheckFailure("smoothing a vertex with unequal labels");
                w.edges[e_in].head = w.edges[e_out].head;
                edge_dead[e_out] = true;
                absorbed_into[e_out] = e_in;
                vertex_dead[v] = true;
                progress = true;
            }
        }
    }

    auto chase = [&](int e) {
        while (e >= 0 && absorbed_into[e] >= 0) e = absorbed_into[e];
        return e;
    };

    Web out;
    out.max_label = w.max_label;
    std::vector<int> vmap(nv, -1), emap(w.edges.size(), -1);
    for (int v = 0; v < nv; ++v)
        if (!vertex_dead[v]) vmap[v] = out.add_vertex(w.vertices[v].is_split);
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        if (edge_dead[i]) continue;
        const auto& e = w.edges[i];
        emap[i] = out.add_edge(e.tail >= 0 ? vmap[e.tail] : -1,
                               e.head >= 0 ? vmap[e.head] : -1, e.label);
    }
    for (int e : domain) {
        int f = emap[e]; // domain edges are never absorbed, only zero-killed
        if (e >= 0 && !edge_dead[e] && f >= 0) out.domain.push_back(f);
        else if (edges[e].label != 0 && f < 0) throw CheckFailure("lost a domain edge while erasing");
    }
    for (int e : codomain) {
        int live = chase(e);
        if (edges[e].label == 0) continue;
        if (live < 0 || emap[live] < 0) throw CheckFailure("lost a codomain edge while erasing");
        out.codomain.push_back(emap[live]);
    }
    out.validate();
    return out;
}

std::string Web::str() const {
    std::ostringstream os;
    auto seq = [](const std::vector<int>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + ")";
    };
    os << "web[" << vertices.size() << "v," << edges.size() << "e] "
       << seq(domain_labels()) << " -> " << seq(codomain_labels());
    if (overflows()) os << " (zero: label exceeds " << max_label << ")";
    return os.str();
}

Web square_web(int max_label, int a, int b, int k) {
    if (a < 1 || b < 1) throw Error("square web needs labels >= 1");
    if (k < 0 || k > std::min(a, b)) throw Error("square web rung index out of range");
    Web w;
    w.max_label = max_label;
    int BL = w.add_vertex(a >= b);  // a >= b: splits off the lower rung
    int BR = w.add_vertex(a < b);
    int TL = w.add_vertex(a < b);
    int TR = w.add_vertex(a >= b);
    w.add_edge(-1, BL, a);          // 0 bottom-left
    w.add_edge(-1, BR, b);          // 1 bottom-right
    w.add_edge(TL, -1, b);          // 2 top-left
    w.add_edge(TR, -1, a);          // 3 top-right
    if (a >= b) {
        w.add_edge(BL, TL, b - k);      // 4 middle-left
        w.add_edge(BR, TR, a + k);      // 5 middle-right
        w.add_edge(BL, BR, a - b + k);  // 6 lower rung
        w.add_edge(TR, TL, k);          // 7 upper rung
    } else {
        w.add_edge(BL, TL, b + k);      // 4 middle-left
        w.add_edge(BR, TR, a - k);      // 5 middle-right
        w.add_edge(BR, BL, b - a + k);  // 6 lower rung
        w.add_edge(TL, TR, k);          // 7 upper rung
    }
    w.domain = {0, 1};
    w.codomain = {2, 3};
    w.validate();
    return w;
}

// ---------------------------------------------------------------------------
// Colorings
// ---------------------------------------------------------------------------

bool ColoredWeb::admissible() const {
    if (colors.size() != web.edges.size()) return false;
    for (std::size_t i = 0; i < colors.size(); ++i)
        if (colors[i].size() != web.edges[i].label) return false;
    for (std::size_t v = 0; v < web.vertices.size(); ++v) {
        RootMultiset thick, thin;
        std::vector<const RootMultiset*> thins;
        const RootMultiset* big = nullptr;
        for (std::size_t i = 0; i < web.edges.size(); ++i) {
            const auto& e = web.edges[i];
            const bool into = e.head == static_cast<int>(v);
            const bool outof = e.tail == static_cast<int>(v);
            if (!into && !outof) continue;
            const bool is_thick = web.vertices[v].is_split ? into : outof;
            if (is_thick) big = &colors[i];
            else thins.push_back(&colors[i]);
        }
        if (big == nullptr || thins.size() != 2) return false;
        if (*big != thins[0]->merged(*thins[1])) return false;
    }
    return true;
}

namespace {

struct VertexSlots {
    int thick = -1;
    int thin1 = -1, thin2 = -1;
};

std::vector<VertexSlots> vertex_slots(const Web& w) {
    std::vector<VertexSlots> out(w.vertices.size());
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        const auto& e = w.edges[i];
        auto place = [&](int v, bool into) {
            const bool is_thick = w.vertices[v].is_split ? into : !into;
            auto& s = out[v];
            if (is_thick) s.thick = static_cast<int>(i);
            else if (s.thin1 < 0) s.thin1 = static_cast<int>(i);
            else s.thin2 = static_cast<int>(i);
        };
        if (e.head >= 0) place(e.head, true);
        if (e.tail >= 0) place(e.tail, false);
    }
    return out;
}

} // namespace

std::vector<std::vector<RootMultiset>> web_colorings(
    const Web& w, const RootMultiset& sigma,
    const std::map<int, RootMultiset>& fixed) {
    const auto slots = vertex_slots(w);
    const int ne = static_cast<int>(w.edges.size());
    std::vector<std::vector<RootMultiset>> results;

    std::vector<std::optional<RootMultiset>> col(ne);
    for (const auto& [e, c] : fixed) {
        if (e < 0 || e >= ne) throw Error("fixed coloring names a missing edge");
        if (c.size() != w.edges[e].label) throw Error("fixed color size differs from the label");
        col[e] = c;
    }
    for (int e = 0; e < ne; ++e)
        if (w.edges[e].label == 0 && !col[e]) col[e] = RootMultiset();

    // Assigns a forced color; returns false when the branch dies.
    std::function<bool(std::vector<std::optional<RootMultiset>>&)> propagate =
        [&](std::vector<std::optional<RootMultiset>>& c) {
            bool progress = true;
            while (progress) {
                progress = false;
                for (const auto& s : slots) {
                    auto& big = c[s.thick];
                    auto& t1 = c[s.thin1];
                    auto& t2 = c[s.thin2];
                    auto assign = [&](std::optional<RootMultiset>& slot, RootMultiset value,
                                      int edge) {
                        if (value.size() != w.edges[edge].label) return false;
                        if (!sigma.contains(value)) return false;
                        slot = std::move(value);
                        progress = true;
                        return true;
                    };
                    if (big && t1 && t2) {
                        if (*big != t1->merged(*t2)) return false;
                    } else if (t1 && t2) {
                        if (!assign(big, t1->merged(*t2), s.thick)) return false;
                    } else if (big && t1) {
                        if (!big->contains(*t1)) return false;
                        if (!assign(t2, big->minus(*t1), s.thin2)) return false;
                    } else if (big && t2) {
                        if (!big->contains(*t2)) return false;
                        if (!assign(t1, big->minus(*t2), s.thin1)) return false;
                    }
                }
            }
            return true;
        };

    std::function<void(std::vector<std::optional<RootMultiset>>)> search =
        [&](std::vector<std::optional<RootMultiset>> c) {
            if (!propagate(c)) return;
            int branch = -1;
            for (int e = 0; e < ne; ++e) {
                if (c[e]) continue;
                if (branch < 0 || w.edges[e].label < w.edges[branch].label) branch = e;
            }
            if (branch < 0) {
                std::vector<RootMultiset> full;
                full.reserve(ne);
                for (auto& o : c) full.push_back(*o);
                results.push_back(std::move(full));
                return;
            }
            for (const auto& cand : sigma.multisubsets(w.edges[branch].label)) {
                auto next = c;
                next[branch] = cand;
                search(std::move(next));
            }
        };
    search(col);
    return results;
}

// ---------------------------------------------------------------------------
// LinkDiagram
// ---------------------------------------------------------------------------

void LinkDiagram::analyze() {
    if (strands < 0) throw Error("negative strand count");
    if (static_cast<int>(labels.size()) != strands)
        throw Error("label list does not match the strand count");
    for (int w : word) {
        const int i = std::abs(w);
        if (i < 1 || i >= strands) throw Error("braid letter " + std::to_string(w) + " out of range");
    }
    std::vector<int> pos(strands); // position (0-based) -> strand id
    std::iota(pos.begin(), pos.end(), 0);
    for (int w : word) {
        const int i = std::abs(w) - 1;
        std::swap(pos[i], pos[i + 1]);
    }
    std::vector<int> final_pos(strands);
    for (int p = 0; p < strands; ++p) final_pos[pos[p]] = p;

    component_of.assign(strands, -1);
    component_labels.clear();
    n_components = 0;
    for (int p = 0; p < strands; ++p) {
        if (component_of[p] >= 0) continue;
        const int comp = n_components++;
        int s = p;
        while (component_of[s] < 0) {
            component_of[s] = comp;
            if (labels[s] != labels[p])
                throw Error("strands " + std::to_string(p) + " and " + std::to_string(s) +
                            " share a component but carry labels " + std::to_string(labels[p]) +
                            " and " + std::to_string(labels[s]));
            s = final_pos[s];
        }
        component_labels.push_back(labels[p]);
    }

    self_writhe.assign(n_components, 0);
    total_writhe = 0;
    for (const auto& site : crossing_sites()) {
        total_writhe += site.sign;
        if (site.comp_left == site.comp_right) self_writhe[site.comp_left] += site.sign;
    }
}

std::vector<CrossingSite> LinkDiagram::crossing_sites() const {
    if (static_cast<int>(component_of.size()) != strands)
        throw Error("diagram not analyzed");
    std::vector<int> pos(strands);
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<CrossingSite> sites;
    for (std::size_t t = 0; t < word.size(); ++t) {
        const int w = word[t];
        const int i = std::abs(w) - 1;
        CrossingSite s;
        s.index = static_cast<int>(t);
        s.pos = i + 1;
        s.sign = w > 0 ? 1 : -1;
        s.strand_left = pos[i];
        s.strand_right = pos[i + 1];
        s.label_left = labels[pos[i]];
        s.label_right = labels[pos[i + 1]];
        s.comp_left = component_of[pos[i]];
        s.comp_right = component_of[pos[i + 1]];
        sites.push_back(s);
        std::swap(pos[i], pos[i + 1]);
    }
    return sites;
}

std::string LinkDiagram::braid_text() const {
    std::ostringstream os;
    os << "braid: " << strands << "; labels: ";
    for (int p = 0; p < strands; ++p) os << (p ? "," : "") << labels[p];
    os << "; word:";
    for (int w : word) os << " " << w;
    return os.str();
}

LinkDiagram make_diagram(int strands, std::vector<int> labels, std::vector<int> word,
                         std::string name) {
    LinkDiagram L;
    L.strands = strands;
    L.labels = std::move(labels);
    L.word = std::move(word);
    L.name = std::move(name);
    L.analyze();
    return L;
}

std::vector<std::string> standard_link_names() {
    return {"unknot", "hopf", "trefoil", "figure-eight"};
}

LinkDiagram standard_link(const std::string& name, int label) {
    if (name == "unknot") return make_diagram(1, {label}, {}, name);
    if (name == "hopf") return make_diagram(2, {label, label}, {1, 1}, name);
    if (name == "trefoil") return make_diagram(2, {label, label}, {1, 1, 1}, name);
    if (name == "figure-eight")
        return make_diagram(3, {label, label, label}, {1, -2, 1, -2}, name);
    throw Error("unknown link name '" + name + "'");
}

LinkDiagram parse_braid(const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), '\n', ';');
    std::map<std::string, std::string> fields;
    std::stringstream ss(normalized);
    std::string piece;
    while (std::getline(ss, piece, ';')) {
        const auto colon = piece.find(':');
        if (colon == std::string::npos) {
            if (piece.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError("braid field without ':': '" + piece + "'");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        fields[trim(piece.substr(0, colon))] = trim(piece.substr(colon + 1));
    }
    if (!fields.count("braid") || !fields.count("labels") || !fields.count("word"))
        throw ParseError("braid text needs 'braid', 'labels' and 'word' fields");
    int strands = 0;
    try {
        strands = std::stoi(fields["braid"]);
    } catch (const std::exception&) {
        throw ParseError("bad strand count '" + fields["braid"] + "'");
    }
    std::vector<int> labels;
    {
        std::stringstream ls(fields["labels"]);
        std::string tok;
        while (std::getline(ls, tok, ','))
            try {
                labels.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ParseError("bad label '" + tok + "'");
            }
    }
    std::vector<int> word;
    {
        std::stringstream wsm(fields["word"]);
        std::string tok;
        while (wsm >> tok)
            try {
                word.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw ParseError("bad braid letter '" + tok + "'");
            }
    }
    try {
        return make_diagram(strands, std::move(labels), std::move(word),
                            fields.count("name") ? fields["name"] : "");
    } catch (const Error& e) {
        throw ParseError(std::string("invalid braid: ") + e.what());
    }
}

LinkDiagram delete_components(const LinkDiagram& L, const std::vector<int>& keep) {
    if (static_cast<int>(L.component_of.size()) != L.strands)
        throw Error("diagram not analyzed");
    std::vector<bool> keep_comp(L.n_components, false);
    for (int c : keep) {
        if (c < 0 || c >= L.n_components) throw Error("component index out of range");
        keep_comp[c] = true;
    }
    auto kept = [&](int strand) { return keep_comp[L.component_of[strand]]; };

    std::vector<int> pos(L.strands);
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<int> word;
    for (int w : L.word) {
        const int i = std::abs(w) - 1;
        if (kept(pos[i]) && kept(pos[i + 1])) {
            int reduced = 1;
            for (int p = 0; p < i; ++p)
                if (kept(pos[p])) reduced++;
            word.push_back(w > 0 ? reduced : -reduced);
        }
        std::swap(pos[i], pos[i + 1]);
    }
    std::vector<int> labels;
    for (int p = 0; p < L.strands; ++p)
        if (kept(p)) labels.push_back(L.labels[p]);
    const int count = static_cast<int>(labels.size());
    return make_diagram(count, std::move(labels), std::move(word));
}

// ---------------------------------------------------------------------------
// Crossing complexes
// ---------------------------------------------------------------------------

std::string FoamSymbol::str() const {
    std::ostringstream os;
    os << (cap ? "cap" : "cup") << "(" << from_k << "->" << to_k << ")";
    if (crossing >= 0) os << "@c" << crossing;
    if (decoration) os << " dec^" << decoration;
    return os.str();
}

CrossingComplex crossing_complex(int max_label, int a, int b, int sign) {
    if (a < 1 || a > max_label - 1 || b < 1 || b > max_label - 1)
        throw Error("crossing labels must lie in 1.." + std::to_string(max_label - 1));
    if (sign != 1 && sign != -1) throw Error("crossing sign must be +1 or -1");
    CrossingComplex cc;
    cc.a = a;
    cc.b = b;
    cc.sign = sign;
    cc.min_ab = std::min(a, b);
    for (int i = 0; i <= cc.min_ab; ++i) {
        CrossingTerm t;
        t.k = sign > 0 ? i : cc.min_ab - i;
        t.degree = sign > 0 ? i : i - cc.min_ab;
        t.web = square_web(max_label, a, b, t.k);
        t.zero = t.web.overflows();
        cc.terms.push_back(std::move(t));
    }
    for (int i = 0; i < cc.min_ab; ++i) {
        FoamSymbol f;
        f.crossing = -1;
        f.cap = sign < 0;
        f.from_k = cc.terms[i].k;
        f.to_k = cc.terms[i + 1].k;
        cc.diffs.push_back(f);
    }
    return cc;
}

// ---------------------------------------------------------------------------
// Diagram complexes
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

// Builds the closed web of one resolution of the braid closure. Every
// closure arc runs through a merge into a max_label edge and back out of a
// split, with an auxiliary complementary edge between them.
Web resolution_web(int max_label, const LinkDiagram& L,
                   const std::vector<CrossingSite>& sites, const std::vector<int>& v) {
    const int m = L.strands;
    const int n = static_cast<int>(L.word.size());
    UnionFind uf((n + 1) * m);
    auto seg = [m](int level, int p0) { return level * m + p0; };
    for (int t = 0; t < n; ++t) {
        const int i = std::abs(L.word[t]) - 1;
        for (int p = 0; p < m; ++p)
            if (p != i && p != i + 1) uf.unite(seg(t, p), seg(t + 1, p));
    }

    // Strand occupying each slot, for the labels.
    std::vector<std::vector<int>> occ(n + 1, std::vector<int>(m));
    std::iota(occ[0].begin(), occ[0].end(), 0);
    for (int t = 0; t < n; ++t) {
        occ[t + 1] = occ[t];
        const int i = std::abs(L.word[t]) - 1;
        std::swap(occ[t + 1][i], occ[t + 1][i + 1]);
    }

    Web w;
    w.max_label = max_label;
    std::map<int, int> seg_edge; // union-find root -> edge index
    auto seg_edge_id = [&](int level, int p0) {
        const int root = uf.find(seg(level, p0));
        auto it = seg_edge.find(root);
        if (it != seg_edge.end()) return it->second;
        const int id = w.add_edge(-1, -1, L.labels[occ[level][p0]]);
        seg_edge.emplace(root, id);
        return id;
    };

    for (int p = 0; p < m; ++p) {
        const int a = L.labels[p];
        const int top = seg_edge_id(n, p);
        const int bottom = seg_edge_id(0, p);
        const int M = w.add_vertex(false);
        const int S = w.add_vertex(true);
        w.edges[top].head = M;
        w.edges[bottom].tail = S;
        w.add_edge(M, S, max_label);
        w.add_edge(S, M, max_label - a);
    }

    for (std::size_t c = 0; c < sites.size(); ++c) {
        const auto& site = sites[c];
        const int t = site.index;
        const int i = site.pos - 1;
        const int a = site.label_left, b = site.label_right;
        const int min_ab = std::min(a, b);
        const int k = site.sign > 0 ? v[c] : min_ab - v[c];
        const int sw = seg_edge_id(t, i), se = seg_edge_id(t, i + 1);
        const int nw = seg_edge_id(t + 1, i), ne = seg_edge_id(t + 1, i + 1);
        const int BL = w.add_vertex(a >= b);
        const int BR = w.add_vertex(a < b);
        const int TL = w.add_vertex(a < b);
        const int TR = w.add_vertex(a >= b);
        w.edges[sw].head = BL;
        w.edges[se].head = BR;
        w.edges[nw].tail = TL;
        w.edges[ne].tail = TR;
        if (a >= b) {
            w.add_edge(BL, TL, b - k);
            w.add_edge(BR, TR, a + k);
            w.add_edge(BL, BR, a - b + k);
            w.add_edge(TR, TL, k);
        } else {
            w.add_edge(BL, TL, b + k);
            w.add_edge(BR, TR, a - k);
            w.add_edge(BR, BL, b - a + k);
            w.add_edge(TL, TR, k);
        }
    }
    w.validate();
    return w;
}

} // namespace

long DiagramComplex::vertex_index(const std::vector<int>& v) const {
    long idx = 0;
    for (std::size_t c = 0; c < radix.size(); ++c) idx = idx * radix[c] + v[c];
    return idx;
}

DiagramComplex diagram_complex(int max_label, const LinkDiagram& L, bool parallel) {
    if (!L.closed) throw Error("only closed diagrams are supported");
    DiagramComplex D;
    D.max_label = max_label;
    D.link = L;
    if (static_cast<int>(D.link.component_of.size()) != D.link.strands) D.link.analyze();
    const auto sites = D.link.crossing_sites();
    const int n = static_cast<int>(sites.size());
    long total = 1;
    for (const auto& site : sites) {
        if (site.label_left < 1 || site.label_left > max_label - 1 ||
            site.label_right < 1 || site.label_right > max_label - 1)
            throw Error("crossing labels must lie in 1.." + std::to_string(max_label - 1));
        D.radix.push_back(std::min(site.label_left, site.label_right) + 1);
        total *= D.radix.back();
    }

    D.vertices.assign(total, DiagramVertex{});
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t idx) {
        std::vector<int> v(n);
        long rest = static_cast<long>(idx);
        for (int c = n - 1; c >= 0; --c) {
            v[c] = static_cast<int>(rest % D.radix[c]);
            rest /= D.radix[c];
        }
        DiagramVertex& dv = D.vertices[idx];
        dv.v = v;
        dv.degree = 0;
        for (int c = 0; c < n; ++c)
            dv.degree += sites[c].sign > 0 ? v[c] : v[c] - (D.radix[c] - 1);
        Web raw = resolution_web(max_label, D.link, sites, v);
        dv.zero = raw.overflows();
        dv.web = raw.erased();
    }, parallel);

    for (long idx = 0; idx < total; ++idx) {
        const auto& dv = D.vertices[idx];
        if (!dv.zero) D.objects_per_degree[dv.degree]++;
        int below = 0;
        for (int c = 0; c < n; ++c) {
            const int min_c = D.radix[c] - 1;
            if (dv.v[c] < min_c) {
                auto vv = dv.v;
                vv[c] += 1;
                const long to = D.vertex_index(vv);
                if (!dv.zero && !D.vertices[to].zero) {
                    DiagramEdge e;
                    e.from = idx;
                    e.to = to;
                    e.crossing = c;
                    e.symbol.crossing = c;
                    e.symbol.cap = sites[c].sign < 0;
                    e.symbol.from_k = sites[c].sign > 0 ? dv.v[c] : min_c - dv.v[c];
                    e.symbol.to_k = e.symbol.from_k + (sites[c].sign > 0 ? 1 : -1);
                    e.sign = below % 2 == 0 ? 1 : -1;
                    D.edges.push_back(e);
                }
            }
            below += dv.v[c];
        }
    }
    return D;
}

long DiagramComplex::check_d2() const {
    const int n = static_cast<int>(radix.size());
    std::map<std::pair<long, int>, const DiagramEdge*> by_start;
    for (const auto& e : edges) by_start[{e.from, e.crossing}] = &e;
    auto edge_at = [&](long from, int c) -> const DiagramEdge* {
        auto it = by_start.find({from, c});
        return it == by_start.end() ? nullptr : it->second;
    };
    long axiom_zero = 0;
    for (const auto& dv : vertices) {
        if (dv.zero) continue;
        const long idx = vertex_index(dv.v);
        for (int c = 0; c < n; ++c) {
            if (dv.v[c] + 2 <= radix[c] - 1) {
                const auto* e1 = edge_at(idx, c);
                if (e1 && edge_at(e1->to, c)) axiom_zero++;
            }
            for (int c2 = c + 1; c2 < n; ++c2) {
                const auto* e1 = edge_at(idx, c);
                const auto* e2 = edge_at(idx, c2);
                if (!e1 || !e2) continue;
                const auto* e12 = edge_at(e1->to, c2);
                const auto* e21 = edge_at(e2->to, c);
                if (!e12 && !e21) continue;
                if (!e12 || !e21)
                    throw CheckFailure("tensor square with a single surviving path");
                if (e1->sign * e12->sign + e2->sign * e21->sign != 0)
                    throw CheckFailure("tensor square signs do not cancel at vertex " +
                                       std::to_string(idx));
            }
        }
    }
    return axiom_zero;
}

std::string DiagramComplex::str() const {
    std::ostringstream os;
    os << "complex over " << (link.name.empty() ? link.braid_text() : link.name) << ": "
       << vertices.size() << " cube vertices, " << edges.size() << " differentials; objects";
    for (const auto& [d, cnt] : objects_per_degree) os << " [" << d << "]:" << cnt;
    return os.str();
}

// ---------------------------------------------------------------------------
// Colorings of a diagram and the decomposition predictor
// ---------------------------------------------------------------------------

std::vector<ComponentColoring> enumerate_colorings(const LinkDiagram& L,
                                                   const RootMultiset& sigma) {
    if (static_cast<int>(L.component_of.size()) != L.strands)
        throw Error("diagram not analyzed");
    std::vector<std::vector<RootMultiset>> options;
    for (int c = 0; c < L.n_components; ++c) {
        if (L.component_labels[c] > sigma.size())
            throw Error("component label exceeds the number of deformation roots");
        options.push_back(sigma.multisubsets(L.component_labels[c]));
    }
    std::vector<ComponentColoring> out;
    ComponentColoring current(L.n_components);
    std::function<void(int)> rec = [&](int c) {
        if (c == L.n_components) {
            out.push_back(current);
            return;
        }
        for (const auto& opt : options[c]) {
            current[c] = opt;
            rec(c + 1);
        }
    };
    rec(0);
    return out;
}

std::string UndeformedTable::key(int N, const std::string& id, std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    std::string k = std::to_string(N) + "|" + id + "|";
    for (std::size_t i = 0; i < labels.size(); ++i)
        k += (i ? "," : "") + std::to_string(labels[i]);
    return k;
}

void UndeformedTable::add(int N, const std::string& id, std::vector<int> labels, TableEntry e) {
    entries_[key(N, id, std::move(labels))] = std::move(e);
}

std::optional<TableEntry> UndeformedTable::lookup(int N, const std::string& id,
                                                  std::vector<int> labels) const {
    auto it = entries_.find(key(N, id, std::move(labels)));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

UndeformedTable UndeformedTable::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad table JSON: ") + e.what());
    }
    UndeformedTable t;
    if (!j.contains("entries") || !j["entries"].is_array())
        throw ParseError("table JSON needs an 'entries' array");
    for (const auto& item : j["entries"]) {
        TableEntry e;
        e.total_dim = item.at("total_dim").get<long>();
        if (item.contains("degrees")) {
            HomologyTable ht;
            for (const auto& d : item["degrees"]) ht.add(d.get<int>(), 1);
            if (ht.total() != e.total_dim)
                throw ParseError("degree multiset size differs from total_dim");
            e.degrees = ht;
        }
        t.add(item.at("N").get<int>(), item.at("id").get<std::string>(),
              item.at("labels").get<std::vector<int>>(), std::move(e));
    }
    return t;
}

std::string UndeformedTable::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [k, e] : entries_) {
        const auto bar1 = k.find('|');
        const auto bar2 = k.find('|', bar1 + 1);
        nlohmann::json item;
        item["N"] = std::stoi(k.substr(0, bar1));
        item["id"] = k.substr(bar1 + 1, bar2 - bar1 - 1);
        std::vector<int> labels;
        std::stringstream ls(k.substr(bar2 + 1));
        std::string tok;
        while (std::getline(ls, tok, ','))
            if (!tok.empty()) labels.push_back(std::stoi(tok));
        item["labels"] = labels;
        item["total_dim"] = e.total_dim;
        if (e.degrees) {
            std::vector<int> flat;
            for (const auto& [d, cnt] : e.degrees->per_degree)
                for (long i = 0; i < cnt; ++i) flat.push_back(d);
            item["degrees"] = flat;
        }
        entries.push_back(item);
    }
    nlohmann::json j;
    j["entries"] = entries;
    return j.dump(2);
}

namespace {

int root_multiplicity(const RootMultiset& s, const Rational& r) {
    int k = 0;
    for (const auto& x : s.roots())
        if (x == r) k++;
    return k;
}

HomologyTable convolve(const HomologyTable& a, const HomologyTable& b) {
    HomologyTable out;
    for (const auto& [d1, x] : a.per_degree)
        for (const auto& [d2, y] : b.per_degree) out.add(d1 + d2, x * y);
    return out;
}

std::string sublink_id(const LinkDiagram& whole, const std::vector<int>& kept,
                       const LinkDiagram& derived) {
    if (static_cast<int>(kept.size()) == whole.n_components)
        return whole.name.empty() ? whole.braid_text() : whole.name;
    for (const auto& name : standard_link_names()) {
        const LinkDiagram ref = standard_link(name);
        if (ref.strands == derived.strands && ref.word == derived.word) return name;
    }
    return derived.braid_text();
}

} // namespace

Prediction predict_decomposition(const LinkDiagram& L, const RootMultiset& sigma,
                                 const UndeformedTable& table) {
    LinkDiagram LL = L;
    if (static_cast<int>(LL.component_of.size()) != LL.strands) LL.analyze();
    Prediction pred;
    bool euler_known = true;
    long long euler = 0;
    for (const auto& f : enumerate_colorings(LL, sigma)) {
        PredictedSummand s;
        s.coloring = f;
        HomologyTable profile;
        profile.add(0, 1);
        bool profile_known = true;
        for (int j = 0; j < sigma.num_distinct(); ++j) {
            const Rational& lambda = sigma.distinct()[j];
            const int Nj = sigma.multiplicities()[j];
            std::vector<int> kept, blabels;
            for (int c = 0; c < LL.n_components; ++c) {
                const int b = root_multiplicity(f[c], lambda);
                if (b > 0 && b < Nj) {
                    kept.push_back(c);
                    blabels.push_back(b);
                }
            }
            std::ostringstream desc;
            desc << "sl" << Nj << "(" << lambda.str() << "): ";
            if (kept.empty()) {
                desc << "empty, dim 1";
                s.factors.push_back(desc.str());
                continue;
            }
            const LinkDiagram sub = delete_components(LL, kept);
            const std::string id = sublink_id(LL, kept, sub);
            const auto entry = table.lookup(Nj, id, blabels);
            if (!entry)
                throw Error("missing table entry " + UndeformedTable::key(Nj, id, blabels));
            s.dim *= entry->total_dim;
            if (entry->degrees && profile_known)
                profile = convolve(profile, *entry->degrees);
            else
                profile_known = false;
            desc << id << " labels (";
            for (std::size_t i = 0; i < blabels.size(); ++i)
                desc << (i ? "," : "") << blabels[i];
            desc << "), dim " << entry->total_dim;
            s.factors.push_back(desc.str());
        }
        if (profile_known) {
            s.profile = profile;
            euler += profile.euler();
        } else {
            euler_known = false;
        }
        pred.total += s.dim;
        pred.summands.push_back(std::move(s));
    }
    if (euler_known) pred.euler = static_cast<long>(euler);
    return pred;
}

std::string Prediction::str() const {
    std::ostringstream os;
    for (const auto& s : summands) {
        os << "coloring";
        for (const auto& c : s.coloring) os << " {" << c.str() << "}";
        os << ": dim " << s.dim;
        for (const auto& f : s.factors) os << "; " << f;
        if (s.profile) os << "; degrees " << s.profile->str();
        os << "\n";
    }
    os << "predicted total " << total;
    if (euler) os << ", euler " << *euler;
    return os.str();
}

} // namespace dlh
