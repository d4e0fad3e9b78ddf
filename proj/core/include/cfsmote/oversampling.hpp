#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfsmote/counterfactual.hpp"
#include "cfsmote/dataset.hpp"

namespace cfsmote {

enum class Method { Baseline, Smote, BorderlineSmote, GeometricSmote, DiceSmote, CfaSmote };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view text);  // accepts "b-smote" and "b_smote" spellings

struct TargetCount {
    bool parity = true;
    std::size_t count = 0;

    static TargetCount Parity() { return TargetCount{true, 0}; }
    static TargetCount Explicit(std::size_t n) { return TargetCount{false, n}; }
};

// Synthetic rows requested for a labeled dataset: the parity deficit
// (majority - minority, never negative) or the explicit count.
std::size_t requested_count(const Dataset& data, const TargetCount& target);

struct AugmenterConfig {
    Method method = Method::Smote;
    std::size_t smote_k = 5;
    TargetCount target_count = TargetCount::Parity();
    std::uint64_t seed = 0;

    // Borderline-SMOTE neighborhood for the DANGER rule
    std::size_t borderline_m = 10;
    // Geometric-SMOTE region shape
    double gsmote_truncation = 1.0;
    double gsmote_deformation = 0.0;
    // CFA native-pair gate
    PairValidity pair_validity;
    // DiCE-lite candidate generation
    DiceConfig dice;
    // class oracle for DiCE-lite; also enables the minority-validity diagnostic
    std::optional<ClassBoundary> boundary;
};

struct SyntheticProvenance {
    std::string generator;             // smote, b_smote, g_smote, cfa, dice_lite, cfa_smote, dice_smote
    std::string source_id;             // seed point (SMOTE family), x' (CFA), or query (DiCE)
    std::string neighbor_id;           // m' for SMOTE-family points
    std::string template_majority_id;  // CFA stage 1 only
    std::string template_minority_id;  // CFA stage 1 only
    double delta = std::numeric_limits<double>::quiet_NaN();  // segment parameter for SMOTE-family points
};

struct Diagnostics {
    std::size_t native_pairs = 0;
    std::size_t unpaired_count = 0;
    std::size_t syncf_count = 0;
    std::size_t smote_stage_count = 0;
    double minority_validity_rate = std::numeric_limits<double>::quiet_NaN();
    double wall_seconds = 0.0;
    bool danger_empty_fallback = false;
    bool k_clamped = false;
    bool degenerate_single_syncf = false;
};

struct AugmentationResult {
    std::vector<Instance> synthetic;                // all labeled Minority
    std::vector<SyntheticProvenance> provenance;    // parallel to synthetic
    Diagnostics diagnostics;
};

// The SMOTE interpolation step; target interpolates with the same delta.
Instance smote_interpolate(const Instance& seed_point, const Instance& neighbor, double delta, std::string id);

AugmentationResult smote(const Dataset& data, std::size_t n, std::size_t k, std::uint64_t seed);
AugmentationResult borderline_smote(const Dataset& data, std::size_t n, std::size_t m, std::size_t k,
                                    std::uint64_t seed);
AugmentationResult gsmote(const Dataset& data, std::size_t n, std::size_t k, double truncation, double deformation,
                          std::uint64_t seed);
AugmentationResult cfa_smote(const Dataset& data, const AugmenterConfig& config);
AugmentationResult dice_smote(const Dataset& data, const AugmenterConfig& config);

// Minority membership over the whole dataset per the Han et al. rule:
// m/2 <= majority-neighbor count < m. Exposed for oracle tests.
std::vector<std::size_t> borderline_danger_set(const Dataset& data, std::size_t m);

// Dispatch on config.method with n from config.target_count; Baseline yields
// an empty result. Wall-clock of the augmentation lands in diagnostics.
AugmentationResult run_augmenter(const Dataset& data, const AugmenterConfig& config);

// original instances plus the synthetic rows; originals are never mutated
Dataset augmented_dataset(const Dataset& original, const AugmentationResult& result);
Dataset augment(const Dataset& data, const AugmenterConfig& config);

// data_model CSV plus `synthetic` flag and generator provenance columns
void write_augmented_csv(std::ostream& out, const Dataset& original, const AugmentationResult& result);

}  // namespace cfsmote
