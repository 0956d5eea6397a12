#pragma once

// Restructured arrays: index maps and containers for split, folded and
// flattened storage.
//
//   split    logical position p lives in part p mod k at offset p div k
//   folded   1D position i lives at (i div cols, i mod cols) of a 2D grid
//   flatten  2D cell (r, c) lives at r*cols + c of a 1D buffer

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arrhide/error.hpp"

namespace arrhide {

enum class ArrayKind { Split, Fold, Flatten };

std::string_view toString(ArrayKind kind);
/// Accepts "split", "fold", "flatten"; throws ConfigError otherwise.
ArrayKind parseArrayKind(std::string_view name);
/// Class name used in source text: SplitArray, FoldedArray, FlattenedArray.
std::string_view className(ArrayKind kind);

struct SplitSlot {
    std::size_t part = 0;
    std::size_t offset = 0;
    bool operator==(const SplitSlot&) const = default;
};

struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const Cell&) const = default;
};

inline SplitSlot splitIndex(std::size_t pos, std::size_t k) { return {pos % k, pos / k}; }

inline std::size_t unsplitIndex(SplitSlot slot, std::size_t k) {
    return slot.offset * k + slot.part;
}

/// Number of positions p in [0, size) with p mod k == j.
inline std::size_t partSize(std::size_t size, std::size_t k, std::size_t j) {
    return j < size ? (size - 1 - j) / k + 1 : 0;
}

inline Cell foldIndex(std::size_t i, std::size_t cols) { return {i / cols, i % cols}; }

inline std::size_t unfoldIndex(std::size_t row, std::size_t col, std::size_t cols) {
    return row * cols + col;
}

inline std::size_t flattenIndex(std::size_t row, std::size_t col, std::size_t cols) {
    return row * cols + col;
}

struct SplitLayout {
    std::size_t size = 0;
    std::size_t k = 2;

    SplitLayout(std::size_t size, std::size_t k);
    std::size_t partSize(std::size_t j) const { return arrhide::partSize(size, k, j); }
};

struct FoldLayout {
    std::size_t size = 0;
    std::size_t cols = 16;

    FoldLayout(std::size_t size, std::size_t cols);
    std::size_t rows() const { return (size + cols - 1) / cols; }
};

struct FlatLayout {
    std::size_t rows = 0;
    std::size_t cols = 0;

    FlatLayout(std::size_t rows, std::size_t cols);
    std::size_t size() const { return rows * cols; }
};

namespace detail {

[[noreturn]] void throwBounds(std::int64_t pos, std::size_t length);
[[noreturn]] void throwBounds2(std::int64_t row, std::int64_t col, const FlatLayout& layout);

inline std::size_t checkPos(std::int64_t pos, std::size_t length) {
    if (pos < 0 || static_cast<std::uint64_t>(pos) >= length) throwBounds(pos, length);
    return static_cast<std::size_t>(pos);
}

}  // namespace detail

/// 1D array spread over k parts by index residue. Cells start value-initialized.
template <typename T>
class SplitArray {
public:
    SplitArray(std::size_t size, std::size_t k = 2) : layout_(size, k), parts_(k) {
        for (std::size_t j = 0; j < k; ++j) parts_[j].resize(layout_.partSize(j));
    }

    void set(std::int64_t pos, T value) {
        const SplitSlot s = splitIndex(detail::checkPos(pos, layout_.size), layout_.k);
        parts_[s.part][s.offset] = std::move(value);
    }

    const T& get(std::int64_t pos) const {
        const SplitSlot s = splitIndex(detail::checkPos(pos, layout_.size), layout_.k);
        return parts_[s.part][s.offset];
    }

    // Sum of the part lengths, as the backing store sees it.
    std::size_t length() const {
        std::size_t n = 0;
        for (const auto& p : parts_) n += p.size();
        return n;
    }

    const SplitLayout& layout() const { return layout_; }
    const std::vector<T>& part(std::size_t j) const { return parts_.at(j); }

private:
    SplitLayout layout_;
    std::vector<std::vector<T>> parts_;
};

/// 1D array stored in a row-major rows x cols grid; the final row is padded.
template <typename T>
class FoldedArray {
public:
    FoldedArray(std::size_t size, std::size_t cols = 16)
        : layout_(size, cols), grid_(layout_.rows() * cols) {}

    void set(std::int64_t pos, T value) { grid_[slot(pos)] = std::move(value); }
    const T& get(std::int64_t pos) const { return grid_[slot(pos)]; }
    std::size_t length() const { return layout_.size; }

    const FoldLayout& layout() const { return layout_; }
    const T& at(Cell cell) const { return grid_.at(unfoldIndex(cell.row, cell.col, layout_.cols)); }

private:
    std::size_t slot(std::int64_t pos) const {
        const Cell c = foldIndex(detail::checkPos(pos, layout_.size), layout_.cols);
        return unfoldIndex(c.row, c.col, layout_.cols);
    }

    FoldLayout layout_;
    std::vector<T> grid_;
};

/// 2D array stored in one flat buffer.
template <typename T>
class FlattenedArray {
public:
    FlattenedArray(std::size_t rows, std::size_t cols) : layout_(rows, cols), flat_(rows * cols) {}

    void set(std::int64_t row, std::int64_t col, T value) { flat_[slot(row, col)] = std::move(value); }
    const T& get(std::int64_t row, std::int64_t col) const { return flat_[slot(row, col)]; }
    std::size_t length() const { return flat_.size(); }

    const FlatLayout& layout() const { return layout_; }

private:
    std::size_t slot(std::int64_t row, std::int64_t col) const {
        if (row < 0 || col < 0 || static_cast<std::uint64_t>(row) >= layout_.rows ||
            static_cast<std::uint64_t>(col) >= layout_.cols) {
            detail::throwBounds2(row, col, layout_);
        }
        return flattenIndex(static_cast<std::size_t>(row), static_cast<std::size_t>(col),
                            layout_.cols);
    }

    FlatLayout layout_;
    std::vector<T> flat_;
};

/// Integer container of any kind, as used by the MiniJ interpreter.
/// Positions are passed as a list: one index for split/fold, two for flatten.
class IntContainer {
public:
    struct Params {
        std::size_t k = 2;
        std::size_t cols = 16;
    };

    /// dims: {size} for split/fold, {rows, cols} for flatten.
    static IntContainer make(ArrayKind kind, std::span<const std::int64_t> dims, Params params);

    ArrayKind kind() const;
    /// Number of index arguments get/set expect.
    std::size_t arity() const { return kind() == ArrayKind::Flatten ? 2 : 1; }

    void set(std::span<const std::int64_t> index, std::int64_t value);
    std::int64_t get(std::span<const std::int64_t> index) const;
    std::size_t length() const;

private:
    using Storage =
        std::variant<SplitArray<std::int64_t>, FoldedArray<std::int64_t>, FlattenedArray<std::int64_t>>;
    explicit IntContainer(Storage s) : storage_(std::move(s)) {}
    void checkArity(std::size_t n) const;

    Storage storage_;
};

}  // namespace arrhide
