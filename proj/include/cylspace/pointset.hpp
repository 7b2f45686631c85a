#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace cyl {

// Finite set of point indices over a fixed universe.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t universe) : bits_(universe) {}

    static PointSet full(std::size_t universe) {
        PointSet s(universe);
        s.bits_.set();
        return s;
    }
    static PointSet of(std::size_t universe, const std::vector<int>& pts) {
        PointSet s(universe);
        for (int p : pts) s.insert(p);
        return s;
    }

    std::size_t universe() const { return bits_.size(); }
    std::size_t size() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }
    bool contains(int p) const { return bits_.test(p); }
    void insert(int p) { bits_.set(p); }
    void erase(int p) { bits_.reset(p); }

    int first() const {
        auto p = bits_.find_first();
        return p == Bits::npos ? -1 : (int)p;
    }
    template <class F>
    void for_each(F&& f) const {
        for (auto p = bits_.find_first(); p != Bits::npos; p = bits_.find_next(p)) f((int)p);
    }
    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(size());
        for_each([&](int p) { out.push_back(p); });
        return out;
    }

    bool subset_of(const PointSet& o) const { return bits_.is_subset_of(o.bits_); }
    bool intersects(const PointSet& o) const { return bits_.intersects(o.bits_); }

    PointSet& operator&=(const PointSet& o) { bits_ &= o.bits_; return *this; }
    PointSet& operator|=(const PointSet& o) { bits_ |= o.bits_; return *this; }
    PointSet& operator-=(const PointSet& o) { bits_ -= o.bits_; return *this; }
    friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
    friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
    friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
    PointSet operator~() const {
        PointSet s = *this;
        s.bits_.flip();
        return s;
    }

    friend bool operator==(const PointSet& a, const PointSet& b) { return a.bits_ == b.bits_; }
    friend bool operator<(const PointSet& a, const PointSet& b) {
        if (a.bits_.size() != b.bits_.size()) return a.bits_.size() < b.bits_.size();
        return a.bits_ < b.bits_;
    }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for_each([&](int p) {
            s += (first ? "" : ",") + std::to_string(p);
            first = false;
        });
        return s + "}";
    }

private:
    using Bits = boost::dynamic_bitset<std::uint64_t>;
    Bits bits_;
};

// Set of coordinate indices, bit i = index i.
using IndexSet = std::uint32_t;

inline bool has(IndexSet s, int i) { return (s >> i) & 1u; }
inline IndexSet bit(int i) { return IndexSet{1} << i; }
inline IndexSet all_indices(int n) { return n >= 32 ? ~IndexSet{0} : bit(n) - 1; }
inline int popcount(IndexSet s) { return __builtin_popcount(s); }
inline std::vector<int> members(IndexSet s) {
    std::vector<int> out;
    for (int i = 0; s; ++i, s >>= 1)
        if (s & 1u) out.push_back(i);
    return out;
}
inline std::string format_indices(IndexSet s) {
    std::string out = "{";
    bool first = true;
    for (int i : members(s)) {
        out += (first ? "" : ",") + std::to_string(i);
        first = false;
    }
    return out + "}";
}

// Partition of {0..n-1} with blocks numbered by first appearance.
struct Partition {
    std::vector<int> block_of;
    std::vector<std::vector<int>> blocks;

    static Partition from_labels(const std::vector<int>& labels) {
        Partition P;
        P.block_of.resize(labels.size());
        std::vector<int> remap;
        for (std::size_t p = 0; p < labels.size(); ++p) {
            int lab = labels[p];
            if (lab >= (int)remap.size()) remap.resize(lab + 1, -1);
            if (remap[lab] < 0) {
                remap[lab] = (int)P.blocks.size();
                P.blocks.emplace_back();
            }
            P.block_of[p] = remap[lab];
            P.blocks[remap[lab]].push_back((int)p);
        }
        return P;
    }
    static Partition discrete(int n) {
        std::vector<int> lab(n);
        std::iota(lab.begin(), lab.end(), 0);
        return from_labels(lab);
    }
    static Partition single(int n) { return from_labels(std::vector<int>(n, 0)); }

    int count() const { return (int)blocks.size(); }
    std::size_t universe() const { return block_of.size(); }
    PointSet block_set(int b) const { return PointSet::of(universe(), blocks[b]); }
    bool operator==(const Partition&) const = default;
};

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
    Partition partition() {
        std::vector<int> lab(parent.size());
        for (std::size_t i = 0; i < parent.size(); ++i) lab[i] = find((int)i);
        return Partition::from_labels(lab);
    }
};

// Finest common coarsening.
inline Partition join(const std::vector<const Partition*>& parts, int n) {
    DisjointSets ds(n);
    for (auto* P : parts)
        for (auto& b : P->blocks)
            for (std::size_t t = 1; t < b.size(); ++t) ds.unite(b[0], b[t]);
    return ds.partition();
}

}  // namespace cyl
