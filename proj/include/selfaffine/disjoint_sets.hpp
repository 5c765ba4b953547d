#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace selfaffine {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t count) : parent_(count) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::size_t x, std::size_t y) { parent_[find(x)] = find(y); }

    bool same(std::size_t x, std::size_t y) { return find(x) == find(y); }

    std::size_t component_count() {
        std::size_t roots = 0;
        for (std::size_t v = 0; v < parent_.size(); ++v) {
            if (find(v) == v) ++roots;
        }
        return roots;
    }

  private:
    std::vector<std::size_t> parent_;
};

}  // namespace selfaffine
