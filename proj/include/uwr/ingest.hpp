#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "uwr/common.hpp"

namespace uwr {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31, calendar-checked

    // Strict ISO 8601 YYYY-MM-DD.
    static Date parse(std::string_view text);

    std::string month_label() const;  // "YYYY-MM"
    std::string year_label() const;   // "YYYY"

    friend bool operator==(const Date&, const Date&) = default;
};

struct EventRecord {
    Date date;
    std::vector<double> counts;  // one per schema attribute, all >= 0
};

struct EventList {
    std::vector<std::string> schema;  // attribute names, from the header
    std::vector<EventRecord> records;
};

// Ordered time-bin x attribute count table. Rows retained after loading or
// aggregation always have positive sums; removed labels are kept for the
// run manifest.
struct ContingencyTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Matrix k;
    double total = 0.0;

    std::vector<std::string> dropped_rows;
    std::vector<std::string> dropped_cols;

    double row_sum(std::size_t i) const;
    double col_sum(std::size_t j) const;

    // Throws data_error if any structural invariant fails.
    void validate() const;
};

struct ExternalSignal {
    std::vector<std::string> labels;  // strictly increasing
    std::vector<double> values;
};

enum class Granularity { month, year };

std::string to_string(Granularity g);

// Event CSV: header "date,<attr1>,...,<attrN>". One EventRecord per data
// line; malformed dates, negative counts and column mismatches are reported
// with their line number.
EventList parse_events(std::istream& in);

// Same, but the header attribute names must equal `schema`.
EventList parse_events(std::istream& in, const std::vector<std::string>& schema);

void write_events_csv(std::ostream& out, const EventList& events);

// Sums event counts into calendar bins over the inclusive label range
// [from, to] ("YYYY-MM" for month granularity, "YYYY" for year). Bins and
// attributes that end up all-zero are dropped and recorded on the result.
ContingencyTable aggregate(const EventList& events, Granularity g,
                           const std::string& from, const std::string& to);

// Table CSV: header "label,<attr1>,...". Counts may be nonnegative reals.
ContingencyTable load_table(std::istream& in);

void write_table_csv(std::ostream& out, const ContingencyTable& table);

// Signal CSV: header "label,value", labels strictly increasing.
ExternalSignal load_signal(std::istream& in);

void write_signal_csv(std::ostream& out, const ExternalSignal& signal);

}  // namespace uwr
