#include "ppxgb/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppxgb {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace ppxgb
