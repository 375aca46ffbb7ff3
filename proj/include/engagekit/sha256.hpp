#pragma once

#include <string>
#include <string_view>

namespace engagekit {

// Lowercase hex SHA-256 digest of `data` (FIPS 180-4).
std::string sha256_hex(std::string_view data);

}  // namespace engagekit
