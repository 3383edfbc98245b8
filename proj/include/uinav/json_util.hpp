// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uinav/errors.hpp"

namespace uinav {

using json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::vector<unsigned char> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path,
                       std::span<const unsigned char> bytes);

// Parses a JSON document, rethrowing parse errors as SchemaError tagged
// with `origin` (a file name or synthetic label).
json parse_json(const std::string& text, const std::string& origin);

// Splits a JSONL document into its header object and record objects.
// The header line must carry {"format_version": 1, "kind": <kind>}.
std::vector<json> parse_jsonl(const std::string& text,
                              const std::string& origin,
                              const std::string& expected_kind);

void check_format_version(const json& doc, const std::string& origin);

[[noreturn]] void schema_fail(const std::string& origin,
                              const std::string& path,
                              const std::string& message);

const json& require_field(const json& obj, const std::string& key,
                          const std::string& origin, const std::string& path);

std::string require_string(const json& obj, const std::string& key,
                           const std::string& origin, const std::string& path);

int require_int(const json& obj, const std::string& key,
                const std::string& origin, const std::string& path);

std::string optional_string(const json& obj, const std::string& key,
                            const std::string& origin, const std::string& path,
                            const std::string& fallback = "");

bool optional_bool(const json& obj, const std::string& key,
                   const std::string& origin, const std::string& path,
                   bool fallback = false);

}  // namespace uinav
