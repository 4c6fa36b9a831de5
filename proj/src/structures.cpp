#include "jm/structures.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace jm {

namespace {

using Mask = std::uint32_t;

bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

std::vector<Mask> maximal_masks(std::vector<Mask> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<Mask> out;
    for (Mask a : sets) {
        bool dominated = false;
        for (Mask b : sets)
            if (a != b && is_subset(a, b)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(a);
    }
    return out;
}

// Maximal sets sorted by size, then lexicographically as index lists.
bool set_less(const VertexSet& a, const VertexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::vector<Mask> relabel(const std::vector<Mask>& sets, const std::vector<int>& perm) {
    std::vector<Mask> out;
    for (Mask m : sets) {
        Mask r = 0;
        for (int v = 0; v < int(perm.size()); ++v)
            if ((m >> v) & 1u) r |= Mask{1} << perm[v];
        out.push_back(r);
    }
    return out;
}

// Comparable key of a family: each member as a sorted index list, family sorted.
std::vector<VertexSet> family_key(const std::vector<Mask>& sets) {
    std::vector<VertexSet> key;
    for (Mask m : sets) key.push_back(from_mask(m));
    std::sort(key.begin(), key.end(), set_less);
    return key;
}

}  // namespace

std::uint32_t to_mask(const VertexSet& s) {
    Mask m = 0;
    for (int v : s) {
        if (v < 1 || v > 32) throw std::out_of_range("vertex index out of range");
        m |= Mask{1} << (v - 1);
    }
    return m;
}

VertexSet from_mask(std::uint32_t m) {
    VertexSet s;
    for (int v = 0; v < 32; ++v)
        if ((m >> v) & 1u) s.push_back(v + 1);
    return s;
}

JmStructure::JmStructure(int n_vertices, const std::vector<VertexSet>& sets) : n_(n_vertices) {
    if (n_ < 1 || n_ > kMaxJointN) throw std::invalid_argument("JmStructure: vertex count out of range");
    std::vector<Mask> masks;
    Mask covered = 0;
    for (const auto& s : sets) {
        for (int v : s)
            if (v < 1 || v > n_) throw std::out_of_range("JmStructure: vertex index out of range");
        Mask m = to_mask(s);
        if (m == 0) continue;
        masks.push_back(m);
        covered |= m;
    }
    for (int v = 0; v < n_; ++v)
        if (!((covered >> v) & 1u)) masks.push_back(Mask{1} << v);
    for (Mask m : maximal_masks(masks)) maximal_.push_back(from_mask(m));
    std::sort(maximal_.begin(), maximal_.end(), set_less);
}

bool JmStructure::contains(const VertexSet& subset) const {
    Mask m = to_mask(subset);
    return std::any_of(maximal_.begin(), maximal_.end(), [&](const VertexSet& s) { return is_subset(m, to_mask(s)); });
}

std::vector<VertexSet> JmStructure::minimal_incompatible() const {
    std::vector<Mask> maxm;
    for (const auto& s : maximal_) maxm.push_back(to_mask(s));
    auto compatible = [&](Mask m) {
        return std::any_of(maxm.begin(), maxm.end(), [&](Mask s) { return is_subset(m, s); });
    };
    std::vector<VertexSet> out;
    for (Mask m = 1; m <= full_mask(n_) && m != 0; ++m) {
        if (compatible(m)) continue;
        bool minimal = true;
        for (int v = 0; v < n_ && minimal; ++v)
            if (((m >> v) & 1u) && !compatible(m & ~(Mask{1} << v))) minimal = false;
        if (minimal) out.push_back(from_mask(m));
    }
    std::sort(out.begin(), out.end(), set_less);
    return out;
}

std::string to_string(const VertexSet& s) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << '}';
    return os.str();
}

std::string to_string(const JmStructure& s) {
    std::string out;
    for (size_t i = 0; i < s.maximal().size(); ++i) out += (i ? "," : "") + to_string(s.maximal()[i]);
    return out;
}

JmStructure n_cycle(int n) {
    if (n < 3) throw std::invalid_argument("n_cycle: N must be at least 3");
    std::vector<VertexSet> sets;
    for (int i = 1; i <= n; ++i) {
        int j = i % n + 1;
        sets.push_back({std::min(i, j), std::max(i, j)});
    }
    return {n, sets};
}

JmStructure nm_compatible(int n, int m) {
    if (n < 1 || n > kMaxJointN) throw std::invalid_argument("nm_compatible: N out of range");
    if (m < 1 || m > n) throw std::invalid_argument("nm_compatible: requires 1 <= M <= N");
    std::vector<VertexSet> sets;
    for (Mask x = 1; x <= full_mask(n); ++x)
        if (std::popcount(x) == m) sets.push_back(from_mask(x));
    return {n, sets};
}

std::string canonical_form(const JmStructure& s) {
    int n = s.n_vertices();
    if (n > kMaxCanonicalVertices) throw std::invalid_argument("canonical_form: too many vertices");
    std::vector<Mask> sets;
    for (const auto& m : s.maximal()) sets.push_back(to_mask(m));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<VertexSet> best;
    bool first = true;
    do {
        auto key = family_key(relabel(sets, perm));
        if (first || std::lexicographical_compare(key.begin(), key.end(), best.begin(), best.end(), set_less)) {
            best = key;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::string out = std::to_string(n) + ":";
    for (size_t i = 0; i < best.size(); ++i) out += (i ? "," : "") + to_string(best[i]);
    return out;
}

bool is_isomorphic(const JmStructure& a, const JmStructure& b) {
    return a.n_vertices() == b.n_vertices() && canonical_form(a) == canonical_form(b);
}

std::vector<JmStructure> enumerate_structures(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("enumerate_structures: limited to 1 <= n <= 5");
    // Subsets with at least two vertices, smallest first, so every proper
    // subset is decided before its supersets.
    std::vector<Mask> order;
    for (Mask m = 1; m <= full_mask(n); ++m)
        if (std::popcount(m) >= 2) order.push_back(m);
    std::stable_sort(order.begin(), order.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });

    std::vector<bool> in(full_mask(n) + 1, false);
    for (int v = 0; v < n; ++v) in[Mask{1} << v] = true;
    std::set<std::string> seen;
    std::vector<JmStructure> out;

    auto emit = [&] {
        std::vector<VertexSet> sets;
        for (Mask m = 1; m <= full_mask(n); ++m)
            if (in[m]) sets.push_back(from_mask(m));
        JmStructure s(n, sets);
        if (seen.insert(canonical_form(s)).second) out.push_back(s);
    };
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == order.size()) {
            emit();
            return;
        }
        Mask m = order[i];
        self(self, i + 1);
        for (int v = 0; v < n; ++v)
            if (((m >> v) & 1u) && !in[m & ~(Mask{1} << v)]) return;
        in[m] = true;
        self(self, i + 1);
        in[m] = false;
    };
    rec(rec, 0);
    return out;
}

Decider closed_form_decider() {
    return [](const std::vector<BinaryQubitPovm>& p) { return decide_closed_form(p).decision; };
}

StructureResult structure_of(const std::vector<BinaryQubitPovm>& povms, const Decider& decider) {
    int n = int(povms.size());
    if (n < 1 || n > kMaxJointN) throw std::invalid_argument("structure_of: N out of range");
    std::vector<Mask> order;
    for (Mask m = 1; m <= full_mask(n); ++m) order.push_back(m);
    std::stable_sort(order.begin(), order.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });

    std::vector<Decision> status(full_mask(n) + 1, Decision::Compatible);
    for (Mask m : order) {
        if (std::popcount(m) == 1) continue;
        bool has_bad_part = false;
        for (int v = 0; v < n && !has_bad_part; ++v)
            if ((m >> v) & 1u) has_bad_part = status[m & ~(Mask{1} << v)] == Decision::Incompatible;
        if (has_bad_part) {
            status[m] = Decision::Incompatible;
            continue;
        }
        std::vector<BinaryQubitPovm> sub;
        for (int v = 0; v < n; ++v)
            if ((m >> v) & 1u) sub.push_back(povms[v]);
        status[m] = decider(sub);
    }

    // Subsets of a compatible set are compatible even when the decider could not tell.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Mask m = *it;
        if (status[m] != Decision::Compatible) continue;
        for (int v = 0; v < n; ++v) {
            Mask sub = m & ~(Mask{1} << v);
            if (sub && ((m >> v) & 1u) && status[sub] == Decision::Unknown) status[sub] = Decision::Compatible;
        }
    }

    StructureResult res;
    std::vector<VertexSet> compatible;
    for (Mask m : order) {
        if (status[m] == Decision::Compatible) compatible.push_back(from_mask(m));
        if (status[m] == Decision::Unknown) res.undecided.push_back(from_mask(m));
    }
    res.structure = JmStructure(n, compatible);
    return res;
}

}  // namespace jm
