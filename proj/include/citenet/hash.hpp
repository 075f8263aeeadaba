#pragma once

#include <string>
#include <string_view>

namespace citenet {

/// SHA-224 of `data`, rendered as 56 lowercase hex characters.
std::string sha224_hex(std::string_view data);

} // namespace citenet
