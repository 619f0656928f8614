#include "fearpp/parallel.hpp"

namespace fearpp::par {

Mode& default_mode() {
#ifdef _OPENMP
    static Mode mode = Mode::OpenMP;
#else
    static Mode mode = Mode::Serial;
#endif
    return mode;
}

int& default_threads() {
    static int n = 0;
    return n;
}

} // namespace fearpp::par
