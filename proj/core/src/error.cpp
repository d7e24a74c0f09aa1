#include "inr_stego/error.hpp"

namespace inr_stego {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : FormatError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

UnsupportedFormatError::UnsupportedFormatError(const std::string& field, const std::string& detail,
                                               std::size_t offset)
    : ParseError("unsupported " + field + ": " + detail, offset), field_(field) {}

}  // namespace inr_stego
