// SPDX-License-Identifier: Apache-2.0
#include "uinav/screen_store.hpp"

#include "uinav/errors.hpp"
#include "uinav/json_util.hpp"

namespace uinav {

std::shared_ptr<const UIScreen> ScreenStore::load(
    const std::string& ref) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(ref);
    if (it != cache_.end()) return it->second;
  }
  std::filesystem::path path = root_ / ref;
  if (!std::filesystem::exists(path))
    throw DanglingRef("screen ref does not exist: " + ref);
  auto screen =
      std::make_shared<const UIScreen>(load_screen(read_text_file(path), ref));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache_.emplace(ref, std::move(screen));
  (void)inserted;
  return it->second;
}

std::vector<unsigned char> ScreenStore::screenshot(
    const UIScreen& screen) const {
  if (screen.screenshot_ref.empty()) return {};
  std::filesystem::path path = root_ / screen.screenshot_ref;
  if (!std::filesystem::exists(path))
    throw DanglingRef("screenshot does not exist: " + screen.screenshot_ref);
  return read_binary_file(path);
}

}  // namespace uinav
