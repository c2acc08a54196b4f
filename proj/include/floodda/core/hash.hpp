#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace floodda {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

/// SHA-256 of every regular file under `root`, keyed by generic relative
/// path, skipping files named `skip_name`.
std::map<std::string, std::string> sha256_tree(const std::filesystem::path& root, const std::string& skip_name = {});

}  // namespace floodda
