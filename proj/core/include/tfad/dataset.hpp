#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tfad/matrix.hpp"
#include "tfad/rng.hpp"

namespace tfad {

enum class ColumnKind { numeric, categorical, label };

// Parsed from a "key=value;key=value" string. Recognized keys:
//   header=auto|true|false   (default auto)
//   label=<name or 0-based index>   (default: last column)
//   positive=<string>        label cells equal to this map to 1, others to 0;
//                            when absent the label cell must parse to 0 or 1
//   categorical=<c1,c2,...>  force these columns categorical
//   numeric=<c1,c2,...>      force these columns numeric
struct Schema {
    enum class Header { automatic, yes, no };
    Header header = Header::automatic;
    std::string label_column;  // empty -> last column
    std::optional<std::string> positive_value;
    std::vector<std::string> categorical;
    std::vector<std::string> numeric;

    static Schema parse(const std::string& text);
};

// Pre-preprocessing form of the data: verbatim cells plus missing markers.
struct RawTable {
    struct Cell {
        std::string text;
        bool missing = false;
    };

    std::vector<std::string> column_names;
    std::vector<ColumnKind> kinds;  // exactly one ColumnKind::label entry
    std::size_t label_col = 0;
    std::optional<std::string> positive_value;  // carried over from the schema
    std::vector<std::vector<Cell>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return column_names.size(); }
};

// Preprocessed feature table: every value in [0,1], no missing entries.
struct Dataset {
    Matrix features;  // N x D
    std::vector<int> labels;
    std::vector<std::string> feature_names;

    std::size_t n() const { return features.rows; }
    std::size_t dim() const { return features.cols; }
    std::size_t anomaly_count() const;
};

// The weak-supervision partition: an unlabeled pool treated as normal (with
// hidden contamination), a small labeled-anomaly set, and a held-out test set.
// The three index sets are pairwise disjoint.
struct WeakLabelSplit {
    std::vector<std::size_t> train_unlabeled;
    std::vector<std::size_t> train_labeled_anomalies;
    std::vector<std::size_t> test;
    double contamination_rate = 0.0;  // requested rate
    std::size_t n_labeled = 0;        // realized count after clamping
    std::uint64_t seed = 0;           // rng state the split was drawn from
};

RawTable load_csv(const std::string& path, const Schema& schema);

// Mean-imputes numeric columns, one-hot expands categorical columns (missing
// becomes its own category), then min-max scales every resulting column to
// [0,1]; constant columns map to 0. Note the min/max statistics are computed
// on the full table before any split, so the split test set shares them.
Dataset preprocess(const RawTable& raw);

// Stratified train/test split, then n_labeled anomalies are drawn into the
// labeled set and further anomalies are hidden in the unlabeled pool until
// they form `contamination` of it; leftover training anomalies are discarded.
// n_labeled is clamped (with a warning on stderr) when the training pool has
// fewer anomalies.
WeakLabelSplit make_weak_split(const Dataset& ds, std::size_t n_labeled, double contamination,
                               double test_fraction, Rng& rng);

// Flat binary cache for fast re-runs: magic, dims, row-major 64-bit floats,
// labels, feature names.
void save_dataset_cache(const std::string& path, const Dataset& ds);
Dataset load_dataset_cache(const std::string& path);
bool is_dataset_cache(const std::string& path);

void write_dataset_csv(const std::string& path, const Dataset& ds);

}  // namespace tfad
