#include "glp/kernels.hpp"

#include <cstdlib>

namespace glp::kernels {

const Backend* avx2_backend_if_supported();
const Backend* neon_backend_if_supported();

namespace {

const Backend* widest_supported() {
  if (const Backend* b = avx2_backend_if_supported()) return b;
  if (const Backend* b = neon_backend_if_supported()) return b;
  return &scalar_backend();
}

const Backend* find_by_name(const std::string& name) {
  for (const Backend* b : available_backends())
    if (name == b->name) return b;
  return nullptr;
}

const Backend*& active_slot() {
  static const Backend* slot = [] {
    if (const char* env = std::getenv("GLPROTEIN_KERNELS")) {
      if (const Backend* b = find_by_name(env)) return b;
    }
    return widest_supported();
  }();
  return slot;
}

}  // namespace

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> out{&scalar_backend()};
  if (const Backend* b = avx2_backend_if_supported()) out.push_back(b);
  if (const Backend* b = neon_backend_if_supported()) out.push_back(b);
  return out;
}

const Backend& active() { return *active_slot(); }

bool select_backend(const std::string& name) {
  if (name == "auto") {
    active_slot() = widest_supported();
    return true;
  }
  if (const Backend* b = find_by_name(name)) {
    active_slot() = b;
    return true;
  }
  return false;
}

}  // namespace glp::kernels
