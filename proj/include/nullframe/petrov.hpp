#pragma once

// Petrov degeneracy classification from the Weyl scalars in a frame adapted
// to the congruence direction k. Labels follow the degeneracy bullets:
// Psi_0 != 0 (or Psi_1 != 0) means k is not a multiple principal null
// direction, so nothing more specific than "general or unaligned" can be
// said; the II/D split is intentionally not decided.

#include <cmath>
#include <string>

#include "nullframe/curvature.hpp"

namespace nullframe {

enum class PetrovClass { GeneralOrUnaligned, IIorD, III, N, Zero };

inline std::string to_string(PetrovClass c) {
    switch (c) {
        case PetrovClass::GeneralOrUnaligned: return "GENERAL_OR_UNALIGNED";
        case PetrovClass::IIorD: return "II_OR_D";
        case PetrovClass::III: return "III";
        case PetrovClass::N: return "N";
        case PetrovClass::Zero: return "ZERO";
    }
    return "?";
}

struct PetrovResult {
    PetrovClass label;
    double tol_rel;
    WeylScalars psi;
};

inline PetrovResult classify(const WeylScalars& psi, double tol_rel = 1e-7) {
    if (!(tol_rel > 0)) throw domain_error("classify: tol_rel must be positive");
    double thr = tol_rel * std::max(1.0, psi.norm_inf());
    PetrovClass label;
    if (std::abs(psi.psi0) > thr)
        label = PetrovClass::GeneralOrUnaligned;
    else if (std::abs(psi.psi1) > thr)
        label = PetrovClass::GeneralOrUnaligned;  // k is a simple principal null direction
    else if (std::abs(psi.psi2) > thr)
        label = PetrovClass::IIorD;
    else if (std::abs(psi.psi3) > thr)
        label = PetrovClass::III;
    else if (std::abs(psi.psi4) > thr)
        label = PetrovClass::N;
    else
        label = PetrovClass::Zero;
    return {label, tol_rel, psi};
}

}  // namespace nullframe
