#include "dlh/report.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "dlh/error.hpp"

namespace dlh {

long HomologyTable::total() const {
    long t = 0;
    for (const auto& [d, n] : per_degree) t += n;
    return t;
}

long long HomologyTable::euler() const {
    long long e = 0;
    for (const auto& [d, n] : per_degree) e += (d % 2 == 0) ? n : -n;
    return e;
}

void HomologyTable::add(int degree, long dim) {
    if (dim == 0) return;
    per_degree[degree] += dim;
    if (per_degree[degree] == 0) per_degree.erase(degree);
}

HomologyTable HomologyTable::shifted(int s) const {
    HomologyTable out;
    for (const auto& [d, n] : per_degree) out.per_degree[d + s] = n;
    return out;
}

std::string HomologyTable::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [d, n] : per_degree) {
        if (!first) os << ", ";
        first = false;
        os << d << ": " << n;
    }
    os << "}";
    return os.str();
}

HomologyTable table_sum(const std::vector<HomologyTable>& parts) {
    HomologyTable out;
    for (const auto& p : parts)
        for (const auto& [d, n] : p.per_degree) out.add(d, n);
    return out;
}

bool equal_up_to_shift(const HomologyTable& a, const HomologyTable& b) {
    if (a.per_degree.empty() || b.per_degree.empty())
        return a.per_degree.empty() && b.per_degree.empty();
    int s = b.per_degree.begin()->first - a.per_degree.begin()->first;
    return a.shifted(s) == b;
}

bool matches_with_shifts(const HomologyTable& whole, const std::vector<HomologyTable>& parts,
                         std::vector<int>* shifts) {
    std::vector<const HomologyTable*> live;
    for (const auto& p : parts)
        if (!p.per_degree.empty()) live.push_back(&p);
    // Anchor each part's lowest degree somewhere in the whole's support.
    std::vector<int> degrees;
    for (const auto& [d, n] : whole.per_degree) degrees.push_back(d);
    if (live.empty()) return whole.per_degree.empty();
    if (whole.total() != table_sum(parts).total()) return false;

    std::vector<int> chosen(live.size(), 0);
    std::function<bool(size_t, HomologyTable)> rec = [&](size_t k, HomologyTable rem) -> bool {
        if (k == live.size()) {
            if (!rem.per_degree.empty()) return false;
            if (shifts) {
                shifts->assign(parts.size(), 0);
                size_t li = 0;
                for (size_t i = 0; i < parts.size(); ++i)
                    if (!parts[i].per_degree.empty()) (*shifts)[i] = chosen[li++];
            }
            return true;
        }
        int base = live[k]->per_degree.begin()->first;
        for (int d : degrees) {
            int s = d - base;
            HomologyTable next = rem;
            bool ok = true;
            for (const auto& [dd, n] : live[k]->per_degree) {
                next.add(dd + s, -n);
                auto it = next.per_degree.find(dd + s);
                if (it != next.per_degree.end() && it->second < 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            chosen[k] = s;
            if (rec(k + 1, std::move(next))) return true;
        }
        return false;
    };
    return rec(0, whole);
}

long Rng::pick(long lo, long hi) {
    if (hi < lo) throw Error("empty pick range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(gen_() % span);
}

Rational Rng::rational(long num_bound, long den_bound) {
    long n = pick(-num_bound, num_bound);
    long d = pick(1, den_bound);
    return Rational(n, d);
}

} // namespace dlh
