#pragma once

namespace ppxgb {

// Resolves a caller-requested thread count: 1 forces the serial reference
// path, 0 means "whatever OpenMP considers the hardware default".
int resolve_threads(int requested);

}  // namespace ppxgb
