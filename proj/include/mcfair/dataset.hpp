#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mcfair {

/// Aligned (true label, blackbox prediction, protected group) triples.
///
/// Labels and groups are stored as indices into `class_names` and
/// `group_names`. All three index vectors have the same length.
struct AdjustmentDataset {
  std::vector<int> y;
  std::vector<int> y_hat;
  std::vector<int> a;
  std::vector<std::string> class_names;
  std::vector<std::string> group_names;

  std::size_t size() const noexcept { return y.size(); }
  int num_classes() const noexcept { return static_cast<int>(class_names.size()); }
  int num_groups() const noexcept { return static_cast<int>(group_names.size()); }

  /// Throws IngestionError when an invariant does not hold.
  void validate() const;
};

/// Column names for CSV ingestion.
struct ColumnSchema {
  std::string y = "y";
  std::string y_hat = "y_hat";
  std::string a = "a";
};

/// Parses CSV text with a header row. Classes are the sorted union of the
/// values in the true and predicted columns; groups are the sorted distinct
/// values of the group column.
AdjustmentDataset parse_dataset(std::istream& in, const ColumnSchema& schema = {});
AdjustmentDataset load_dataset(const std::filesystem::path& path,
                               const ColumnSchema& schema = {});

/// Writes the dataset as CSV using label names.
void write_dataset(std::ostream& out, const AdjustmentDataset& ds,
                   const ColumnSchema& schema = {});
std::string dataset_to_csv(const AdjustmentDataset& ds, const ColumnSchema& schema = {});

/// Rows of `ds` selected by `rows`, keeping both dictionaries.
AdjustmentDataset subset(const AdjustmentDataset& ds, std::span<const std::size_t> rows);

/// Fold assignment for cross-validation.
struct SplitPlan {
  int folds = 5;
  std::uint64_t seed = 0;
  std::vector<int> assignments;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Stratified by (y, a) cell for cells with at least `folds` members; rows of
/// smaller cells are spread at random. Fold sizes differ by at most one.
SplitPlan make_splits(const AdjustmentDataset& ds, int folds, std::uint64_t seed);

}  // namespace mcfair
