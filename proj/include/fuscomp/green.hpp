// Green correspondence between centric Mackey functors over F and over the
// normalizer N_F(H), and the end-to-end check of the minimal-centric example.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fuscomp/idem.hpp"
#include "fuscomp/io.hpp"
#include "fuscomp/mackeymod.hpp"

namespace fuscomp {

// Y: F-centric K <=_F H inside N_S(H), K != H. X: those not F-isomorphic to H.
// Both are actual subgroups, not class representatives.
std::vector<int> family_Y(const FusionSystem& F, int H);
std::vector<int> family_X(const FusionSystem& F, int H);

enum class Direction { down, up };

struct CorrespondenceSummand {
    MackeyModule module;
    LevelMap idempotent;            // projection of the decomposed module onto this summand
    DefectData defect;
    bool companion_projective = false;  // projective relative to Y (down) or X (up)
};

struct CorrespondenceResult {
    MackeyModule input;
    Direction direction = Direction::down;
    int H = -1;
    MackeyModule decomposed;  // M restricted to N_F, or N induced to F
    std::vector<CorrespondenceSummand> summands;
    int distinguished = -1;
    std::vector<int> X, Y;
    // Down only: the summand singled out by the endomorphism-ring correspondence
    // with b = Id_M is conjugate to the distinguished idempotent.
    bool endomorphism_check = false;
};

// M over F, indecomposable with vertex H (H fully normalized and centric).
CorrespondenceResult green_down(const MackeyContext& ctx, const MackeyModule& M, int H,
                                std::uint64_t seed = kDefaultSeed);
// N over N_F(H), indecomposable with vertex H.
CorrespondenceResult green_up(const MackeyContext& ctx, const MackeyModule& N, int H,
                              std::uint64_t seed = kDefaultSeed);
std::string correspondence_json(const CorrespondenceResult& r);

// Klein four subgroups of S that are fully normalized, in id order.
std::vector<int> klein_fours(const FusionSystem& F);

// Idempotent c_phi + c_phi^2 at H for the first order-3 automorphism phi of H
// (in Aut_F(H) order); nullopt when Aut_F(H) has no element of order 3.
std::optional<FpElement> example_idempotent(const MackeyAlgebra& A, const PrimeField& k, int H);

struct ExampleOptions {
    int klein = 0;                      // which Klein four of S
    bool corrupt_idempotent = false;    // feed c_phi alone, which is not idempotent
    bool refine_idempotent = false;     // continue with a local summand of the cyclic module
    std::uint64_t seed = kDefaultSeed;
};

struct ExampleStep {
    std::string step;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> data;
};

struct ExampleReport {
    std::vector<ExampleStep> steps;
    bool passed() const;
    // First failed step, or empty.
    std::string failed_step() const;
    std::string json() const;
    std::string text() const;
};

// Runs the example pipeline over F_2 on the given system (which must carry its
// ambient group) and stops at the first failing step.
ExampleReport verify_example(const FusionInput& input, const ExampleOptions& opt = {});

}  // namespace fuscomp
