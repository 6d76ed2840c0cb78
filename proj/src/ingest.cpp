#include "uwr/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace uwr {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            break;
        }
        fields.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

bool parse_number(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw data_error("line " + std::to_string(line_no) + ": " + what);
}

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return d[month - 1];
}

std::string pad4(int v) {
    std::string s = std::to_string(v);
    while (s.size() < 4) s.insert(s.begin(), '0');
    return s;
}

std::string pad2(int v) {
    std::string s = std::to_string(v);
    if (s.size() < 2) s.insert(s.begin(), '0');
    return s;
}

// Month index on a single axis, for range arithmetic.
int month_index(int year, int month) { return year * 12 + (month - 1); }

int parse_year_label(const std::string& label) {
    int y = 0;
    if (label.size() != 4 || !parse_int(label, y))
        throw validation_error("invalid year label '" + label + "' (expected YYYY)");
    return y;
}

int parse_month_label(const std::string& label) {
    int y = 0, m = 0;
    if (label.size() != 7 || label[4] != '-' || !parse_int(label.substr(0, 4), y) ||
        !parse_int(label.substr(5, 2), m) || m < 1 || m > 12)
        throw validation_error("invalid month label '" + label + "' (expected YYYY-MM)");
    return month_index(y, m);
}

std::string month_label_of(int index) {
    int y = index / 12;
    int m = index % 12 + 1;
    return pad4(y) + "-" + pad2(m);
}

}  // namespace

Date Date::parse(std::string_view text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day))
        throw data_error("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw data_error("invalid calendar date '" + std::string(text) + "'");
    return d;
}

std::string Date::month_label() const { return pad4(year) + "-" + pad2(month); }

std::string Date::year_label() const { return pad4(year); }

std::string to_string(Granularity g) {
    return g == Granularity::month ? "month" : "year";
}

double ContingencyTable::row_sum(std::size_t i) const {
    double s = 0.0;
    for (double v : k.row(i)) s += v;
    return s;
}

double ContingencyTable::col_sum(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < k.rows(); ++i) s += k(i, j);
    return s;
}

void ContingencyTable::validate() const {
    if (row_labels.size() != k.rows() || col_labels.size() != k.cols())
        throw data_error("table labels do not match matrix shape");
    if (k.rows() == 0 || k.cols() == 0) throw data_error("table is empty");
    for (std::size_t i = 1; i < row_labels.size(); ++i)
        if (row_labels[i - 1] >= row_labels[i])
            throw data_error("row labels not strictly increasing at '" + row_labels[i] + "'");
    double sum = 0.0;
    for (std::size_t i = 0; i < k.rows(); ++i) {
        double rs = 0.0;
        for (std::size_t j = 0; j < k.cols(); ++j) {
            double v = k(i, j);
            if (v < 0.0) throw data_error("negative count in row '" + row_labels[i] + "'");
            rs += v;
        }
        if (rs <= 0.0) throw data_error("zero row '" + row_labels[i] + "'");
        sum += rs;
    }
    for (std::size_t j = 0; j < k.cols(); ++j)
        if (col_sum(j) <= 0.0) throw data_error("zero column '" + col_labels[j] + "'");
    if (std::abs(sum - total) > 1e-9 * std::max(1.0, sum))
        throw data_error("stored grand total disagrees with cell sum");
}

EventList parse_events(std::istream& in) {
    EventList out;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw data_error("empty input: no header");
    ++line_no;
    auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "date")
        throw data_error("header must be 'date,<attr1>,...'");
    out.schema.assign(header.begin() + 1, header.end());

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            fail_line(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                   std::to_string(fields.size()));
        EventRecord rec;
        try {
            rec.date = Date::parse(fields[0]);
        } catch (const data_error& e) {
            fail_line(line_no, e.what());
        }
        rec.counts.reserve(out.schema.size());
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v = 0.0;
            if (!parse_number(fields[j], v))
                fail_line(line_no, "non-numeric count '" + fields[j] + "' in column '" +
                                       out.schema[j - 1] + "'");
            if (v < 0.0)
                fail_line(line_no, "negative count " + format_double(v) + " in column '" +
                                       out.schema[j - 1] + "'");
            rec.counts.push_back(v);
        }
        out.records.push_back(std::move(rec));
    }
    if (out.records.empty()) throw data_error("no event records");
    return out;
}

EventList parse_events(std::istream& in, const std::vector<std::string>& schema) {
    EventList out = parse_events(in);
    if (out.schema != schema)
        throw data_error("event header does not match the expected attribute schema");
    return out;
}

void write_events_csv(std::ostream& out, const EventList& events) {
    out << "date";
    for (const auto& name : events.schema) out << ',' << name;
    out << '\n';
    for (const auto& rec : events.records) {
        out << rec.date.year_label() << '-' << pad2(rec.date.month) << '-' << pad2(rec.date.day);
        for (double v : rec.counts) out << ',' << format_double(v);
        out << '\n';
    }
}

ContingencyTable aggregate(const EventList& events, Granularity g,
                           const std::string& from, const std::string& to) {
    const std::size_t n_attr = events.schema.size();
    int lo = 0, hi = 0;
    if (g == Granularity::month) {
        lo = parse_month_label(from);
        hi = parse_month_label(to);
    } else {
        lo = parse_year_label(from);
        hi = parse_year_label(to);
    }
    if (lo > hi) throw validation_error("empty range: '" + from + "' is after '" + to + "'");

    const std::size_t n_bins = static_cast<std::size_t>(hi - lo + 1);
    Matrix k(n_bins, n_attr);
    for (const auto& rec : events.records) {
        if (rec.counts.size() != n_attr)
            throw validation_error("event count vector does not match the attribute schema");
        int bin = g == Granularity::month ? month_index(rec.date.year, rec.date.month)
                                          : rec.date.year;
        if (bin < lo || bin > hi) continue;  // outside the requested range
        const std::size_t i = static_cast<std::size_t>(bin - lo);
        for (std::size_t j = 0; j < n_attr; ++j) k(i, j) += rec.counts[j];
    }

    ContingencyTable table;
    table.col_labels = events.schema;

    // Zero bins cannot carry a profile; drop them but remember the labels.
    std::vector<std::size_t> keep_rows;
    for (std::size_t i = 0; i < n_bins; ++i) {
        std::string label = g == Granularity::month ? month_label_of(lo + static_cast<int>(i))
                                                    : pad4(lo + static_cast<int>(i));
        double rs = 0.0;
        for (std::size_t j = 0; j < n_attr; ++j) rs += k(i, j);
        if (rs > 0.0) {
            keep_rows.push_back(i);
            table.row_labels.push_back(std::move(label));
        } else {
            table.dropped_rows.push_back(std::move(label));
        }
    }
    if (keep_rows.empty()) throw data_error("all rows zero: no events inside the range");

    std::vector<std::size_t> keep_cols;
    for (std::size_t j = 0; j < n_attr; ++j) {
        double cs = 0.0;
        for (std::size_t i : keep_rows) cs += k(i, j);
        if (cs > 0.0)
            keep_cols.push_back(j);
        else
            table.dropped_cols.push_back(events.schema[j]);
    }

    table.col_labels.clear();
    for (std::size_t j : keep_cols) table.col_labels.push_back(events.schema[j]);
    table.k = Matrix(keep_rows.size(), keep_cols.size());
    for (std::size_t a = 0; a < keep_rows.size(); ++a)
        for (std::size_t b = 0; b < keep_cols.size(); ++b) {
            double v = k(keep_rows[a], keep_cols[b]);
            table.k(a, b) = v;
            table.total += v;
        }
    table.validate();
    return table;
}

ContingencyTable load_table(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw data_error("empty input: no header");
    ++line_no;
    auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "label")
        throw data_error("header must be 'label,<attr1>,...'");

    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size())
            fail_line(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                   std::to_string(fields.size()));
        labels.push_back(fields[0]);
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v = 0.0;
            if (!parse_number(fields[j], v))
                fail_line(line_no, "non-numeric count '" + fields[j] + "'");
            if (v < 0.0) fail_line(line_no, "negative count in column '" + header[j] + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("no table rows");
    for (std::size_t i = 1; i < labels.size(); ++i)
        if (labels[i - 1] >= labels[i])
            throw data_error("labels not strictly increasing at '" + labels[i] + "'");

    const std::size_t n_attr = header.size() - 1;
    ContingencyTable table;

    std::vector<std::size_t> keep_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double rs = 0.0;
        for (double v : rows[i]) rs += v;
        if (rs > 0.0) {
            keep_rows.push_back(i);
            table.row_labels.push_back(labels[i]);
        } else {
            table.dropped_rows.push_back(labels[i]);
        }
    }
    if (keep_rows.empty()) throw data_error("all rows zero");

    std::vector<std::size_t> keep_cols;
    for (std::size_t j = 0; j < n_attr; ++j) {
        double cs = 0.0;
        for (std::size_t i : keep_rows) cs += rows[i][j];
        if (cs > 0.0)
            keep_cols.push_back(j);
        else
            table.dropped_cols.push_back(header[j + 1]);
    }
    for (std::size_t j : keep_cols) table.col_labels.push_back(header[j + 1]);

    table.k = Matrix(keep_rows.size(), keep_cols.size());
    for (std::size_t a = 0; a < keep_rows.size(); ++a)
        for (std::size_t b = 0; b < keep_cols.size(); ++b) {
            double v = rows[keep_rows[a]][keep_cols[b]];
            table.k(a, b) = v;
            table.total += v;
        }
    table.validate();
    return table;
}

void write_table_csv(std::ostream& out, const ContingencyTable& table) {
    out << "label";
    for (const auto& name : table.col_labels) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < table.k.rows(); ++i) {
        out << table.row_labels[i];
        for (std::size_t j = 0; j < table.k.cols(); ++j) out << ',' << format_double(table.k(i, j));
        out << '\n';
    }
}

ExternalSignal load_signal(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw data_error("empty input: no header");
    ++line_no;
    auto header = split_csv(line);
    if (header.size() != 2 || header[0] != "label" || header[1] != "value")
        throw data_error("header must be 'label,value'");

    ExternalSignal sig;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 2) fail_line(line_no, "expected 2 columns");
        double v = 0.0;
        if (!parse_number(fields[1], v))
            fail_line(line_no, "non-numeric value '" + fields[1] + "'");
        if (!sig.labels.empty()) {
            if (fields[0] == sig.labels.back())
                fail_line(line_no, "duplicate label '" + fields[0] + "'");
            if (fields[0] < sig.labels.back())
                fail_line(line_no, "labels not strictly increasing");
        }
        sig.labels.push_back(fields[0]);
        sig.values.push_back(v);
    }
    if (sig.values.empty()) throw data_error("empty signal");
    return sig;
}

void write_signal_csv(std::ostream& out, const ExternalSignal& signal) {
    out << "label,value\n";
    for (std::size_t i = 0; i < signal.values.size(); ++i)
        out << signal.labels[i] << ',' << format_double(signal.values[i]) << '\n';
}

}  // namespace uwr
