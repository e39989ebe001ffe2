#include "ratectl/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace ratectl::kernels {

KernelTable const& active()
{
    static KernelTable const& selected = [] () -> KernelTable const& {
        char const* env = std::getenv("RATECTL_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") {
            return scalar();
        }
        if (KernelTable const* t = avx2()) {
            return *t;
        }
        return scalar();
    }();
    return selected;
}

} // namespace ratectl::kernels
