#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

#include "partmix/common.hpp"

namespace partmix {

/// A partition of {0..n-1} into disjoint non-empty cells.
///
/// Stored canonically: every cell sorted ascending, cells sorted by their
/// minimum element. The block-label array (restricted growth string) is kept
/// alongside so refinement tests are O(n).
class SetPartition {
public:
    SetPartition() = default;

    explicit SetPartition(std::vector<std::vector<int>> cells) : cells_(std::move(cells)) {
        int n = 0;
        for (const auto& c : cells_) n += static_cast<int>(c.size());
        n_ = n;
        if (n_ <= 0) throw DimensionError("set partition must cover at least one element");
        labels_.assign(static_cast<std::size_t>(n_), -1);
        for (auto& c : cells_) {
            if (c.empty()) throw DimensionError("set partition cells must be non-empty");
            std::sort(c.begin(), c.end());
        }
        std::sort(cells_.begin(), cells_.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (std::size_t b = 0; b < cells_.size(); ++b) {
            for (int i : cells_[b]) {
                if (i < 0 || i >= n_) throw DimensionError("set partition element out of range");
                if (labels_[static_cast<std::size_t>(i)] != -1)
                    throw DimensionError("set partition cells overlap");
                labels_[static_cast<std::size_t>(i)] = static_cast<int>(b);
            }
        }
    }

    /// Builds from arbitrary block labels (label[i] = block of element i).
    static SetPartition from_labels(const std::vector<int>& labels) {
        std::vector<std::vector<int>> cells;
        std::vector<int> remap;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            int l = labels[i];
            if (l < 0) throw DimensionError("negative block label");
            if (static_cast<std::size_t>(l) >= remap.size()) remap.resize(static_cast<std::size_t>(l) + 1, -1);
            if (remap[static_cast<std::size_t>(l)] < 0) {
                remap[static_cast<std::size_t>(l)] = static_cast<int>(cells.size());
                cells.emplace_back();
            }
            cells[static_cast<std::size_t>(remap[static_cast<std::size_t>(l)])].push_back(static_cast<int>(i));
        }
        return SetPartition(std::move(cells));
    }

    static SetPartition singletons(int n) {
        std::vector<int> l(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) l[static_cast<std::size_t>(i)] = i;
        return from_labels(l);
    }

    static SetPartition full(int n) { return from_labels(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    int size() const noexcept { return n_; }
    int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
    const std::vector<std::vector<int>>& cells() const noexcept { return cells_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int block_of(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

    std::vector<int> cell_sizes() const {
        std::vector<int> s;
        for (const auto& c : cells_) s.push_back(static_cast<int>(c.size()));
        return s;
    }

    /// 1-based rendering, e.g. "{1,2}{3}".
    std::string to_string() const {
        std::string out;
        for (const auto& c : cells_) {
            out += '{';
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (k) out += ',';
                out += std::to_string(c[k] + 1);
            }
            out += '}';
        }
        return out;
    }

    friend bool operator==(const SetPartition& a, const SetPartition& b) { return a.cells_ == b.cells_; }
    friend auto operator<=>(const SetPartition& a, const SetPartition& b) { return a.cells_ <=> b.cells_; }

private:
    int n_ = 0;
    std::vector<std::vector<int>> cells_;
    std::vector<int> labels_;
};

}  // namespace partmix
