#pragma once

#include "smczoo/types.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace smczoo {

enum class Modality { CT, GM, JD, WM, ALL };

const char* modality_name(Modality m);
std::optional<Modality> modality_from_name(const std::string& name);

/// Labeled feature table for one modality. Labels are +1 (SMC) / -1 (HC).
/// Immutable by convention after construction; validate() enforces the
/// invariants.
struct Dataset {
    Modality modality = Modality::CT;
    Matrix features;                         // n_subjects x n_features
    std::vector<std::string> feature_names;
    Vector labels;                           // +1 / -1
    std::vector<std::string> subject_ids;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
    void validate() const;  // throws on any invariant violation

    Dataset subset(const std::vector<int>& rows) const;
};

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct FoldAssignment {
    std::vector<int> fold_of;
    int k = 5;
};

struct ScalerParams {
    Vector mean;
    Vector stdev;                      // floored at 1e-12
    std::vector<int> constant_columns; // flagged, standardised to zero
};

/// Load one delimited feature table: header row of names, a `subject_id`
/// column, a `label` column with SMC/HC (or +1/-1), all other columns
/// numeric features. A column count different from expected_dim is a
/// warning (written to `warn`), not an error.
Dataset load_modality(const std::string& path, Modality modality,
                      std::optional<int> expected_dim = std::nullopt,
                      std::ostream* warn = nullptr);

/// Column-wise fusion into the ALL set. Requires identical subject order;
/// demographic columns (age, sex) are kept once, all other names get a
/// source-modality prefix.
Dataset fuse_all(const std::vector<Dataset>& parts);

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, const SplitSpec& spec);

/// Z-score with train statistics only (population std convention);
/// constant columns are floored, zeroed and flagged.
std::tuple<Dataset, Dataset, ScalerParams> standardize(const Dataset& train,
                                                       const Dataset& test);

Matrix apply_scaler(const ScalerParams& sp, const MatrixRef& X);

FoldAssignment kfold_indices(const VectorRef& labels, int k, std::uint64_t seed);

struct DemographicsResult {
    double t_stat = 0.0;
    double p_ttest = 1.0;
    double chi2_stat = 0.0;
    double p_chi2 = 1.0;
};

/// Welch two-sided t-test on age, Pearson chi-squared (1 dof) on sex.
DemographicsResult demographics_tests(const VectorRef& age_a, const VectorRef& age_b,
                                      const std::vector<int>& sex_a,
                                      const std::vector<int>& sex_b);

}  // namespace smczoo
