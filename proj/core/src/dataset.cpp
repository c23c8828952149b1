#include "tfad/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>

#include "tfad/serialize.hpp"

namespace tfad {

namespace {

constexpr char kCacheMagic[8] = {'T', 'F', 'A', 'D', 'D', 'S', '1', '\n'};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_missing_marker(const std::string& text) {
    static const std::set<std::string> markers = {"", "?", "na", "n/a", "nan", "null"};
    return markers.count(to_lower(trim(text))) > 0;
}

std::optional<double> parse_number(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

// One CSV record; handles quoted fields with embedded commas and "" escapes.
// Quoted content is preserved verbatim, unquoted cells are trimmed.
std::vector<RawTable::Cell> parse_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<RawTable::Cell> cells;
    std::string field;
    bool quoted = false;       // whole field was quoted
    bool in_quotes = false;
    std::size_t i = 0;
    auto flush = [&]() {
        RawTable::Cell c;
        c.text = quoted ? field : trim(field);
        c.missing = !quoted && is_missing_marker(c.text);
        cells.push_back(std::move(c));
        field.clear();
        quoted = false;
    };
    while (i < line.size()) {
        char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && trim(field).empty()) {
            in_quotes = true;
            quoted = true;
            field.clear();
        } else if (ch == ',') {
            flush();
        } else {
            field.push_back(ch);
        }
        ++i;
    }
    if (in_quotes)
        throw std::runtime_error("line " + std::to_string(line_no) + ": unterminated quote");
    flush();
    return cells;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        std::string item = trim(s.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

std::size_t resolve_column(const std::string& ref, const std::vector<std::string>& names,
                           bool has_header) {
    if (has_header) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == ref) return i;
    }
    if (!ref.empty() && std::all_of(ref.begin(), ref.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        std::size_t idx = std::stoull(ref);
        if (idx < names.size()) return idx;
        throw std::runtime_error("column index " + ref + " out of range (have " +
                                 std::to_string(names.size()) + " columns)");
    }
    throw std::runtime_error("unknown column '" + ref + "'");
}

}  // namespace

Schema Schema::parse(const std::string& text) {
    Schema s;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string::npos) semi = text.size();
        const std::string pair = trim(text.substr(start, semi - start));
        start = semi + 1;
        if (pair.empty()) continue;
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("schema: expected key=value, got '" + pair + "'");
        const std::string key = to_lower(trim(pair.substr(0, eq)));
        const std::string value = trim(pair.substr(eq + 1));
        if (key == "header") {
            const std::string v = to_lower(value);
            if (v == "auto")
                s.header = Header::automatic;
            else if (v == "true" || v == "yes" || v == "1")
                s.header = Header::yes;
            else if (v == "false" || v == "no" || v == "0")
                s.header = Header::no;
            else
                throw std::runtime_error("schema: header must be auto|true|false");
        } else if (key == "label") {
            s.label_column = value;
        } else if (key == "positive") {
            s.positive_value = value;
        } else if (key == "categorical") {
            s.categorical = split_list(value);
        } else if (key == "numeric") {
            s.numeric = split_list(value);
        } else {
            throw std::runtime_error("schema: unknown key '" + key + "'");
        }
    }
    return s;
}

RawTable load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::vector<std::vector<RawTable::Cell>> records;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        records.push_back(parse_csv_line(line, line_no));
        line_numbers.push_back(line_no);
    }
    if (records.empty()) throw std::runtime_error("empty CSV file: " + path);

    const std::size_t n_cols = records[0].size();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != n_cols)
            throw std::runtime_error("line " + std::to_string(line_numbers[r]) + ": expected " +
                                     std::to_string(n_cols) + " columns, got " +
                                     std::to_string(records[r].size()));
    }

    // Header detection: a first-row cell that is non-numeric text above a
    // column whose second row parses as a number.
    bool has_header;
    switch (schema.header) {
        case Schema::Header::yes: has_header = true; break;
        case Schema::Header::no: has_header = false; break;
        default: {
            has_header = false;
            if (records.size() >= 2) {
                for (std::size_t c = 0; c < n_cols; ++c) {
                    const auto& top = records[0][c];
                    if (!top.missing && !parse_number(top.text) &&
                        parse_number(records[1][c].text)) {
                        has_header = true;
                        break;
                    }
                }
            }
            break;
        }
    }

    RawTable table;
    if (has_header) {
        for (const auto& cell : records[0]) table.column_names.push_back(cell.text);
        table.rows.assign(records.begin() + 1, records.end());
    } else {
        for (std::size_t c = 0; c < n_cols; ++c)
            table.column_names.push_back("c" + std::to_string(c));
        table.rows = std::move(records);
    }
    if (table.rows.empty()) throw std::runtime_error("CSV has a header but no data rows: " + path);

    table.label_col = schema.label_column.empty()
                          ? n_cols - 1
                          : resolve_column(schema.label_column, table.column_names, has_header);
    table.positive_value = schema.positive_value;

    // Column kinds: forced lists first, inference for the rest.
    table.kinds.assign(n_cols, ColumnKind::numeric);
    std::vector<bool> forced(n_cols, false);
    for (const std::string& ref : schema.categorical) {
        const std::size_t c = resolve_column(ref, table.column_names, has_header);
        table.kinds[c] = ColumnKind::categorical;
        forced[c] = true;
    }
    for (const std::string& ref : schema.numeric) {
        const std::size_t c = resolve_column(ref, table.column_names, has_header);
        table.kinds[c] = ColumnKind::numeric;
        forced[c] = true;
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c == table.label_col || forced[c]) continue;
        for (const auto& row : table.rows) {
            if (!row[c].missing && !parse_number(row[c].text)) {
                table.kinds[c] = ColumnKind::categorical;
                break;
            }
        }
    }
    table.kinds[table.label_col] = ColumnKind::label;

    // Numeric cells that fail to parse are recorded as missing.
    for (auto& row : table.rows) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (table.kinds[c] == ColumnKind::numeric && !row[c].missing &&
                !parse_number(row[c].text))
                row[c].missing = true;
        }
    }

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r][table.label_col].missing)
            throw std::runtime_error("row " + std::to_string(r + 1) + ": missing label value");
    }
    return table;
}

std::size_t Dataset::anomaly_count() const {
    std::size_t n = 0;
    for (int y : labels)
        if (y == 1) ++n;
    return n;
}

Dataset preprocess(const RawTable& raw) {
    const std::size_t n = raw.n_rows();
    if (n == 0) throw std::runtime_error("preprocess: empty table");

    std::vector<std::vector<double>> columns;
    std::vector<std::string> names;

    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        if (raw.kinds[c] == ColumnKind::label) continue;
        if (raw.kinds[c] == ColumnKind::numeric) {
            std::vector<double> col(n, 0.0);
            double mean = 0.0;
            std::size_t present = 0;
            for (std::size_t r = 0; r < n; ++r) {
                if (raw.rows[r][c].missing) continue;
                col[r] = *parse_number(raw.rows[r][c].text);
                mean += col[r];
                ++present;
            }
            if (present > 0) mean /= static_cast<double>(present);
            for (std::size_t r = 0; r < n; ++r)
                if (raw.rows[r][c].missing) col[r] = mean;
            columns.push_back(std::move(col));
            names.push_back(raw.column_names[c]);
        } else {
            // Missing is its own category; values ordered lexicographically so
            // the expansion is independent of row order.
            std::map<std::string, std::size_t> value_index;
            std::vector<std::string> row_values(n);
            for (std::size_t r = 0; r < n; ++r) {
                row_values[r] = raw.rows[r][c].missing ? "<missing>" : raw.rows[r][c].text;
                value_index.emplace(row_values[r], 0);
            }
            std::size_t next = columns.size();
            for (auto& [value, idx] : value_index) {
                idx = next++;
                columns.emplace_back(n, 0.0);
                names.push_back(raw.column_names[c] + "=" + value);
            }
            for (std::size_t r = 0; r < n; ++r)
                columns[value_index[row_values[r]]][r] = 1.0;
        }
    }

    // Min-max scale each resulting column into [0,1]; constant columns map to 0.
    for (auto& col : columns) {
        const auto [mn_it, mx_it] = std::minmax_element(col.begin(), col.end());
        const double mn = *mn_it, mx = *mx_it;
        if (mx > mn) {
            const double scale = 1.0 / (mx - mn);
            for (double& x : col) x = (x - mn) * scale;
        } else {
            std::fill(col.begin(), col.end(), 0.0);
        }
    }

    Dataset ds;
    ds.feature_names = std::move(names);
    ds.features = Matrix(n, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) ds.features(r, c) = columns[c][r];

    ds.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& cell = raw.rows[r][raw.label_col];
        if (raw.positive_value) {
            ds.labels[r] = (cell.text == *raw.positive_value) ? 1 : 0;
        } else {
            const auto v = parse_number(cell.text);
            if (!v || (*v != 0.0 && *v != 1.0))
                throw std::runtime_error("row " + std::to_string(r + 1) + ": label '" +
                                         cell.text +
                                         "' is not 0/1 and no positive value was configured");
            ds.labels[r] = static_cast<int>(*v);
        }
    }
    return ds;
}

WeakLabelSplit make_weak_split(const Dataset& ds, std::size_t n_labeled, double contamination,
                               double test_fraction, Rng& rng) {
    if (ds.anomaly_count() == 0)
        throw std::invalid_argument("make_weak_split: dataset has no anomalies");
    if (contamination < 0.0 || contamination >= 1.0)
        throw std::invalid_argument("make_weak_split: contamination must be in [0,1)");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("make_weak_split: test_fraction must be in (0,1)");

    WeakLabelSplit split;
    split.contamination_rate = contamination;
    split.seed = rng.state();

    std::vector<std::size_t> normals, anomalies;
    for (std::size_t i = 0; i < ds.n(); ++i)
        (ds.labels[i] == 1 ? anomalies : normals).push_back(i);
    rng.shuffle(normals);
    rng.shuffle(anomalies);

    // Stratified split: each class contributes test_fraction of itself.
    const auto n_test_norm =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(normals.size())));
    const auto n_test_anom = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(anomalies.size())));

    split.test.assign(normals.begin(), normals.begin() + n_test_norm);
    split.test.insert(split.test.end(), anomalies.begin(), anomalies.begin() + n_test_anom);

    std::vector<std::size_t> train_norm(normals.begin() + n_test_norm, normals.end());
    std::vector<std::size_t> train_anom(anomalies.begin() + n_test_anom, anomalies.end());

    if (n_labeled > train_anom.size()) {
        std::cerr << "warning: requested " << n_labeled << " labeled anomalies but only "
                  << train_anom.size() << " are available; clamping\n";
        n_labeled = train_anom.size();
    }
    split.n_labeled = n_labeled;
    split.train_labeled_anomalies.assign(train_anom.begin(), train_anom.begin() + n_labeled);

    // Hide anomalies in the unlabeled pool until they form `contamination` of
    // it: k / (U + k) = c  =>  k = c U / (1 - c). Leftover anomalies are
    // discarded so the realized rate stays within one sample of the request.
    const std::size_t available = train_anom.size() - n_labeled;
    const double u = static_cast<double>(train_norm.size());
    auto k = static_cast<std::size_t>(std::llround(contamination * u / (1.0 - contamination)));
    k = std::min(k, available);

    split.train_unlabeled = std::move(train_norm);
    split.train_unlabeled.insert(split.train_unlabeled.end(), train_anom.begin() + n_labeled,
                                 train_anom.begin() + n_labeled + k);
    rng.shuffle(split.train_unlabeled);
    return split;
}

void save_dataset_cache(const std::string& path, const Dataset& ds) {
    BinaryWriter w(path);
    w.magic(kCacheMagic);
    w.matrix(ds.features);
    w.u64(ds.labels.size());
    for (int y : ds.labels) w.u8(static_cast<std::uint8_t>(y));
    w.u64(ds.feature_names.size());
    for (const auto& name : ds.feature_names) w.str(name);
}

Dataset load_dataset_cache(const std::string& path) {
    BinaryReader r(path);
    r.expect_magic(kCacheMagic);
    Dataset ds;
    ds.features = r.matrix();
    const std::uint64_t n_labels = r.u64();
    if (n_labels != ds.features.rows)
        throw std::runtime_error("dataset cache " + path + ": label count " +
                                 std::to_string(n_labels) + " does not match " +
                                 std::to_string(ds.features.rows) + " rows");
    ds.labels.resize(n_labels);
    for (auto& y : ds.labels) y = r.u8();
    const std::uint64_t n_names = r.u64();
    if (n_names != ds.features.cols)
        throw std::runtime_error("dataset cache " + path + ": feature name count mismatch");
    ds.feature_names.resize(n_names);
    for (auto& name : ds.feature_names) name = r.str();
    return ds;
}

bool is_dataset_cache(const std::string& path) { return file_has_magic(path, kCacheMagic); }

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q.push_back(c);
        }
        return q + "\"";
    };
    for (const auto& name : ds.feature_names) out << quote(name) << ',';
    out << "label\n";
    char buf[32];
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
            out << buf << ',';
        }
        out << ds.labels[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tfad
