#pragma once

#include <stdexcept>
#include <string>

namespace ppxgb {

// Score aggregation / interpretation mode carried by models, key bundles and
// encrypted models.
enum class Objective {
    binary_margin,
    softmax,
};

inline std::string objective_name(Objective o) {
    switch (o) {
        case Objective::binary_margin: return "binary_margin";
        case Objective::softmax: return "softmax";
    }
    throw std::invalid_argument("objective_name: unknown objective");
}

inline Objective objective_from_name(const std::string& s) {
    if (s == "binary_margin") return Objective::binary_margin;
    if (s == "softmax") return Objective::softmax;
    throw std::invalid_argument("unknown objective: " + s);
}

}  // namespace ppxgb
