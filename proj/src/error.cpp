#include "arrhide/error.hpp"

namespace arrhide {

std::string SourcePos::str() const {
    return std::to_string(line) + ":" + std::to_string(column);
}

namespace {

std::string withPos(const std::string& what, const SourcePos& pos) {
    return pos.known() ? pos.str() + ": " + what : what;
}

}  // namespace

Error::Error(std::string what, SourcePos pos)
    : std::runtime_error(withPos(what, pos)), message_(std::move(what)), pos_(pos) {}

}  // namespace arrhide
