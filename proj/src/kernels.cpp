#include "katlind/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace katlind::kernels {
namespace {

const KernelOps* resolve_default() {
    if (const char* env = std::getenv("KATLIND_SIMD")) {
        const std::string_view v{env};
        if (v == "scalar") return &scalar_ops();
        if (v == "avx2" && avx2_supported()) return &avx2_ops();
        // Unknown/unsupported value: fall through to autodetect.
    }
    if (avx2_supported()) return &avx2_ops();
    return &scalar_ops();
}

std::atomic<const KernelOps*>& active_slot() {
    static std::atomic<const KernelOps*> slot{resolve_default()};
    return slot;
}

}  // namespace

const KernelOps& active_ops() { return *active_slot().load(std::memory_order_relaxed); }

void set_active_backend(std::string_view name) {
    if (name == "scalar") {
        active_slot().store(&scalar_ops(), std::memory_order_relaxed);
        return;
    }
    if (name == "avx2") {
        if (!avx2_supported())
            throw ConfigError("avx2 backend not supported on this machine");
        active_slot().store(&avx2_ops(), std::memory_order_relaxed);
        return;
    }
    throw ConfigError("unknown kernel backend: " + std::string(name));
}

std::string active_backend_name() { return active_ops().name; }

}  // namespace katlind::kernels
