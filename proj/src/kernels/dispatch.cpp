#include "tdcs/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace tdcs::kernels {

#if defined(TDCS_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table()
{
#if defined(TDCS_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* best_available()
{
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

const KernelTable* initial_table()
{
    const char* env = std::getenv("TDCS_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
    return best_available();
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name)
{
    const KernelTable* table = nullptr;
    if (name == "scalar") {
        table = &scalar_table();
    } else if (name == "avx2") {
        table = avx2_table();
    } else if (name == "auto") {
        table = best_available();
    }
    if (table == nullptr) return false;
    current().store(table, std::memory_order_release);
    return true;
}

}  // namespace tdcs::kernels
