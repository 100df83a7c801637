#pragma once

// Helpers shared by the parser, the fact extractor, the printer and type
// binding. Not part of the public interface.

#include <string>
#include <string_view>

#include "micropat/ast.hpp"

namespace micropat::detail {

bool is_elementary_type_name(std::string_view name);

// uint -> uint256, int -> int256, byte -> bytes1, fixed -> fixed128x18 ...
std::string normalize_elementary(std::string_view name);

// Type text as used in signatures: `address payable` -> `address`.
std::string abi_type(std::string_view normalized);

// Splits "mapping(K=>V)" into key and value; false for non-mappings.
bool split_mapping(std::string_view type, std::string& key, std::string& value);

// Element type for an index access on `type` (array element or mapping
// value); empty when the type is not indexable.
std::string indexed_type(std::string_view type);

std::string print_expr(const ast::Expr& e);

}  // namespace micropat::detail
