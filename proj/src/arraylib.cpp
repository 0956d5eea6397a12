#include "arrhide/arraylib.hpp"

namespace arrhide {

std::string_view toString(ArrayKind kind) {
    switch (kind) {
        case ArrayKind::Split: return "split";
        case ArrayKind::Fold: return "fold";
        case ArrayKind::Flatten: return "flatten";
    }
    return "?";
}

ArrayKind parseArrayKind(std::string_view name) {
    if (name == "split") return ArrayKind::Split;
    if (name == "fold") return ArrayKind::Fold;
    if (name == "flatten") return ArrayKind::Flatten;
    throw ConfigError("unknown array kind '" + std::string(name) + "'");
}

std::string_view className(ArrayKind kind) {
    switch (kind) {
        case ArrayKind::Split: return "SplitArray";
        case ArrayKind::Fold: return "FoldedArray";
        case ArrayKind::Flatten: return "FlattenedArray";
    }
    return "?";
}

SplitLayout::SplitLayout(std::size_t size, std::size_t k) : size(size), k(k) {
    if (k < 2) throw ConfigError("split needs k >= 2, got " + std::to_string(k));
}

FoldLayout::FoldLayout(std::size_t size, std::size_t cols) : size(size), cols(cols) {
    if (cols < 1) throw ConfigError("fold needs cols >= 1");
}

FlatLayout::FlatLayout(std::size_t rows, std::size_t cols) : rows(rows), cols(cols) {}

namespace detail {

void throwBounds(std::int64_t pos, std::size_t length) {
    throw BoundsError("index " + std::to_string(pos) + " out of bounds for length " +
                      std::to_string(length));
}

void throwBounds2(std::int64_t row, std::int64_t col, const FlatLayout& layout) {
    throw BoundsError("cell (" + std::to_string(row) + ", " + std::to_string(col) +
                      ") out of bounds for " + std::to_string(layout.rows) + "x" +
                      std::to_string(layout.cols));
}

}  // namespace detail

IntContainer IntContainer::make(ArrayKind kind, std::span<const std::int64_t> dims, Params params) {
    const std::size_t want = kind == ArrayKind::Flatten ? 2 : 1;
    if (dims.size() != want) {
        throw ConfigError(std::string(className(kind)) + " takes " + std::to_string(want) +
                          " size argument(s), got " + std::to_string(dims.size()));
    }
    for (std::int64_t d : dims) {
        if (d < 0) throw BoundsError("negative array size " + std::to_string(d));
    }
    const auto d0 = static_cast<std::size_t>(dims[0]);
    switch (kind) {
        case ArrayKind::Split: return IntContainer(SplitArray<std::int64_t>(d0, params.k));
        case ArrayKind::Fold: return IntContainer(FoldedArray<std::int64_t>(d0, params.cols));
        case ArrayKind::Flatten:
            return IntContainer(FlattenedArray<std::int64_t>(d0, static_cast<std::size_t>(dims[1])));
    }
    throw ConfigError("bad array kind");
}

ArrayKind IntContainer::kind() const { return static_cast<ArrayKind>(storage_.index()); }

void IntContainer::checkArity(std::size_t n) const {
    if (n != arity()) {
        throw BoundsError(std::string(className(kind())) + " expects " +
                          std::to_string(arity()) + " index argument(s), got " +
                          std::to_string(n));
    }
}

void IntContainer::set(std::span<const std::int64_t> index, std::int64_t value) {
    checkArity(index.size());
    switch (storage_.index()) {
        case 0: std::get<0>(storage_).set(index[0], value); return;
        case 1: std::get<1>(storage_).set(index[0], value); return;
        default: std::get<2>(storage_).set(index[0], index[1], value); return;
    }
}

std::int64_t IntContainer::get(std::span<const std::int64_t> index) const {
    checkArity(index.size());
    switch (storage_.index()) {
        case 0: return std::get<0>(storage_).get(index[0]);
        case 1: return std::get<1>(storage_).get(index[0]);
        default: return std::get<2>(storage_).get(index[0], index[1]);
    }
}

std::size_t IntContainer::length() const {
    return std::visit([](const auto& c) { return c.length(); }, storage_);
}

}  // namespace arrhide
