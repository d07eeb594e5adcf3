#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mmit/interval.hpp"
#include "mmit/tree.hpp"

namespace mmit {

/// Mean squared distance from each prediction to its interval (zero inside or
/// on the boundary; an infinite limit never penalizes its side).
double interval_mse(const std::vector<double>& predictions,
                    const std::vector<IntervalTarget>& targets);

/// Best constant prediction under interval_mse, solved exactly with the
/// squared-loss solver at margin 0.
struct ConstantFit {
    double prediction;
    double mse;
};
ConstantFit constant_baseline(const Dataset& train);

/// The constant baseline as a single-leaf tree.
Tree constant_model(const Dataset& train);

/// Squared-error regression tree on real labels. Leaves predict the mean of
/// their labels; splits maximize the reduction in summed squared error with
/// the same stopping rules as TreeParams (margin and loss are ignored).
Tree cart_fit(const std::vector<std::vector<double>>& features, const std::vector<double>& labels,
              std::size_t n_features, const TreeParams& params);

/// Each interval becomes up to two real examples labelled lower + margin and
/// upper - margin; infinite limits are dropped. Throws when no finite limit
/// remains.
Tree interval_cart_fit(const Dataset& train, const TreeParams& params);

enum class Learner { MmitLinear, MmitSquared, IntervalCart, Constant };
std::string_view to_string(Learner learner);
Learner parse_learner(std::string_view name);

/// Fits one learner; `params.loss` is overridden for the MMIT learners and
/// `params` is ignored entirely by Constant.
Tree fit_learner(Learner learner, const Dataset& train, const TreeParams& params);

/// Margins {0, 0.125, 0.25, 0.5, 1, 2} x depths {1, 2, 4, 8, 16, unlimited}
/// x min_samples_split {2, 8, 32}.
std::vector<TreeParams> default_grid();

struct CVPlan {
    std::size_t n_folds = 5;
    std::size_t inner_folds = 5;
    std::vector<TreeParams> grid = default_grid();
    std::uint64_t seed = 0;
    std::size_t threads = 1;  // 0: hardware concurrency

    void validate() const;
};

/// Fold id of every index: a seeded shuffle dealt round-robin into k folds.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

struct FoldResult {
    std::size_t fold;
    Learner learner;
    TreeParams selected;
    double train_mse;
    double test_mse;
};

/// Nested cross-validation: per outer fold, the grid point with the lowest
/// mean inner-fold MSE (lowest training MSE when the outer-training part is
/// smaller than inner_folds) is refit on the outer-training part and scored
/// on the held-out fold.
std::vector<FoldResult> run_cv(const Dataset& data, const CVPlan& plan, Learner learner);

double mean_test_mse(const std::vector<FoldResult>& results);

/// Header: fold,model,params,train_mse,test_mse
void write_cv_report(std::ostream& out, const std::vector<FoldResult>& results);

}  // namespace mmit
