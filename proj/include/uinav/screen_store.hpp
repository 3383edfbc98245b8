// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "uinav/ui_screen.hpp"

namespace uinav {

// Loads and caches screen documents addressed by suite-root-relative refs.
// Immutable after warm-up in spirit; the cache itself is thread-safe.
class ScreenStore {
 public:
  ScreenStore() = default;
  explicit ScreenStore(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  // Throws DanglingRef when the file is missing, SchemaError when malformed.
  std::shared_ptr<const UIScreen> load(const std::string& ref) const;

  // PNG bytes of the screen's screenshot; empty when the screen has none.
  std::vector<unsigned char> screenshot(const UIScreen& screen) const;

 private:
  std::filesystem::path root_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<const UIScreen>> cache_;
};

}  // namespace uinav
