// SPDX-License-Identifier: Apache-2.0
#include "uinav/json_util.hpp"

#include <fstream>
#include <sstream>

namespace uinav {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<unsigned char> read_binary_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

void write_binary_file(const std::filesystem::path& path,
                       std::span<const unsigned char> bytes) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

json parse_json(const std::string& text, const std::string& origin) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw SchemaError(origin + ": not valid JSON");
  return doc;
}

std::vector<json> parse_jsonl(const std::string& text,
                              const std::string& origin,
                              const std::string& expected_kind) {
  std::vector<json> records;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded())
      throw SchemaError(origin + ": line " + std::to_string(lineno) +
                        ": not valid JSON");
    if (!saw_header) {
      check_format_version(doc, origin);
      std::string kind = optional_string(doc, "kind", origin, "header");
      if (kind != expected_kind)
        schema_fail(origin, "header.kind",
                    "expected \"" + expected_kind + "\", got \"" + kind + "\"");
      saw_header = true;
      continue;
    }
    records.push_back(std::move(doc));
  }
  if (!saw_header)
    throw SchemaError(origin + ": missing header line");
  return records;
}

void check_format_version(const json& doc, const std::string& origin) {
  if (!doc.is_object() || !doc.contains("format_version"))
    schema_fail(origin, "format_version", "missing required field");
  const json& v = doc["format_version"];
  if (!v.is_number_integer() || v.get<int>() != 1)
    schema_fail(origin, "format_version", "unsupported version");
}

void schema_fail(const std::string& origin, const std::string& path,
                 const std::string& message) {
  std::string where = origin.empty() ? path : origin + ": " + path;
  throw SchemaError(where + ": " + message);
}

const json& require_field(const json& obj, const std::string& key,
                          const std::string& origin,
                          const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    schema_fail(origin, path.empty() ? key : path + "." + key,
                "missing required field");
  return obj[key];
}

std::string require_string(const json& obj, const std::string& key,
                           const std::string& origin,
                           const std::string& path) {
  const json& v = require_field(obj, key, origin, path);
  if (!v.is_string())
    schema_fail(origin, path.empty() ? key : path + "." + key,
                "expected a string");
  return v.get<std::string>();
}

int require_int(const json& obj, const std::string& key,
                const std::string& origin, const std::string& path) {
  const json& v = require_field(obj, key, origin, path);
  if (!v.is_number_integer())
    schema_fail(origin, path.empty() ? key : path + "." + key,
                "expected an integer");
  return v.get<int>();
}

std::string optional_string(const json& obj, const std::string& key,
                            const std::string& origin, const std::string& path,
                            const std::string& fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (v.is_null()) return fallback;
  if (!v.is_string())
    schema_fail(origin, path.empty() ? key : path + "." + key,
                "expected a string");
  return v.get<std::string>();
}

bool optional_bool(const json& obj, const std::string& key,
                   const std::string& origin, const std::string& path,
                   bool fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (v.is_null()) return fallback;
  if (!v.is_boolean())
    schema_fail(origin, path.empty() ? key : path + "." + key,
                "expected a boolean");
  return v.get<bool>();
}

}  // namespace uinav
