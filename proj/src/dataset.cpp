#include "mcfair/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "mcfair/error.hpp"
#include "mcfair/io.hpp"
#include "mcfair/rng.hpp"

namespace mcfair {

namespace {

void check_names(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size())
    throw IngestionError(std::string("duplicate ") + what + " names");
}

void check_indices(const std::vector<int>& idx, int bound, const char* what) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= bound)
      throw IngestionError(std::string(what) + " index out of range at row " +
                           std::to_string(i));
  }
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IngestionError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<int> encode(const std::vector<std::string>& values,
                        const std::vector<std::string>& names) {
  std::map<std::string, int> lookup;
  for (std::size_t i = 0; i < names.size(); ++i) lookup.emplace(names[i], static_cast<int>(i));
  std::vector<int> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(lookup.at(v));
  return out;
}

}  // namespace

void AdjustmentDataset::validate() const {
  if (y.empty()) throw IngestionError("dataset has no rows");
  if (y_hat.size() != y.size() || a.size() != y.size())
    throw IngestionError("label, prediction and group columns differ in length");
  if (class_names.size() < 2) throw IngestionError("fewer than two classes");
  if (group_names.size() < 2) throw IngestionError("single protected group");
  check_names(class_names, "class");
  check_names(group_names, "group");
  check_indices(y, num_classes(), "label");
  check_indices(y_hat, num_classes(), "prediction");
  check_indices(a, num_groups(), "group");
}

AdjustmentDataset parse_dataset(std::istream& in, const ColumnSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw IngestionError("empty file");
  const auto header = io::split_csv_line(line);
  const std::size_t cy = column_of(header, schema.y);
  const std::size_t cyh = column_of(header, schema.y_hat);
  const std::size_t ca = column_of(header, schema.a);
  const std::size_t needed = std::max({cy, cyh, ca}) + 1;

  std::vector<std::string> ys, yhs, as;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = io::split_csv_line(line);
    if (fields.size() < needed)
      throw IngestionError("too few fields on line " + std::to_string(line_no));
    ys.push_back(fields[cy]);
    yhs.push_back(fields[cyh]);
    as.push_back(fields[ca]);
  }
  if (ys.empty()) throw IngestionError("empty file");

  std::set<std::string> classes(ys.begin(), ys.end());
  classes.insert(yhs.begin(), yhs.end());
  std::set<std::string> groups(as.begin(), as.end());
  if (groups.size() < 2) throw IngestionError("single protected group");

  AdjustmentDataset ds;
  ds.class_names.assign(classes.begin(), classes.end());
  ds.group_names.assign(groups.begin(), groups.end());
  ds.y = encode(ys, ds.class_names);
  ds.y_hat = encode(yhs, ds.class_names);
  ds.a = encode(as, ds.group_names);
  ds.validate();
  return ds;
}

AdjustmentDataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_dataset(in, schema);
}

void write_dataset(std::ostream& out, const AdjustmentDataset& ds, const ColumnSchema& schema) {
  out << schema.y << ',' << schema.y_hat << ',' << schema.a << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.class_names[ds.y[i]] << ',' << ds.class_names[ds.y_hat[i]] << ','
        << ds.group_names[ds.a[i]] << '\n';
  }
}

std::string dataset_to_csv(const AdjustmentDataset& ds, const ColumnSchema& schema) {
  std::ostringstream ss;
  write_dataset(ss, ds, schema);
  return ss.str();
}

AdjustmentDataset subset(const AdjustmentDataset& ds, std::span<const std::size_t> rows) {
  AdjustmentDataset out;
  out.class_names = ds.class_names;
  out.group_names = ds.group_names;
  out.y.reserve(rows.size());
  out.y_hat.reserve(rows.size());
  out.a.reserve(rows.size());
  for (std::size_t r : rows) {
    out.y.push_back(ds.y.at(r));
    out.y_hat.push_back(ds.y_hat.at(r));
    out.a.push_back(ds.a.at(r));
  }
  return out;
}

std::vector<std::size_t> SplitPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> SplitPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> SplitPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(folds), 0);
  for (int f : assignments) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

SplitPlan make_splits(const AdjustmentDataset& ds, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("folds must be at least 2");
  if (static_cast<std::size_t>(folds) > ds.size())
    throw std::invalid_argument("folds (" + std::to_string(folds) +
                                ") exceeds number of rows (" + std::to_string(ds.size()) + ")");

  const int C = ds.num_classes();
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(C * ds.num_groups()));
  for (std::size_t i = 0; i < ds.size(); ++i)
    cells[static_cast<std::size_t>(ds.a[i] * C + ds.y[i])].push_back(i);

  auto eng = rng::make_engine(seed);
  // Large cells are laid out contiguously and dealt round-robin, so every
  // fold receives floor or ceil of each cell. Leftover rows are shuffled
  // together and dealt after them.
  std::vector<std::size_t> order;
  order.reserve(ds.size());
  std::vector<std::size_t> leftovers;
  for (auto& cell : cells) {
    if (cell.size() >= static_cast<std::size_t>(folds)) {
      rng::shuffle(cell, eng);
      order.insert(order.end(), cell.begin(), cell.end());
    } else {
      leftovers.insert(leftovers.end(), cell.begin(), cell.end());
    }
  }
  rng::shuffle(leftovers, eng);
  order.insert(order.end(), leftovers.begin(), leftovers.end());

  SplitPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignments.assign(ds.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    plan.assignments[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(folds));
  return plan;
}

}  // namespace mcfair
