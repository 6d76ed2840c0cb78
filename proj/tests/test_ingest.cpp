#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "uwr/ingest.hpp"

using namespace uwr;

TEST_SUITE_BEGIN("ingest");

TEST_CASE("parse_events reads a small fixture verbatim") {
    std::istringstream in(
        "date,a,b\n"
        "1990-01-05,1,2\n"
        "1990-01-20,0,3\n"
        "1990-03-01,4,0\n");
    const EventList events = parse_events(in);
    REQUIRE(events.schema == std::vector<std::string>{"a", "b"});
    REQUIRE(events.records.size() == 3);
    CHECK(events.records[0].date == Date{1990, 1, 5});
    CHECK(events.records[0].counts == std::vector<double>{1, 2});
    CHECK(events.records[1].counts == std::vector<double>{0, 3});
    CHECK(events.records[2].date == Date{1990, 3, 1});
}

TEST_CASE("parse_events rejects a header-only file") {
    std::istringstream in("date,a,b\n");
    CHECK_THROWS_WITH_AS(parse_events(in), "no event records", data_error);
}

TEST_CASE("parse_events names the line and column of a negative count") {
    std::istringstream in("date,a,b\n1990-01-05,1,2\n1990-02-01,-1,2\n");
    try {
        parse_events(in);
        FAIL("expected data_error");
    } catch (const data_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("'a'") != std::string::npos);
        CHECK(msg.find("negative") != std::string::npos);
    }
}

TEST_CASE("parse_events reports malformed dates and ragged lines") {
    std::istringstream bad_date("date,a\n1990-13-40,1\n");
    CHECK_THROWS_WITH_AS(parse_events(bad_date), "line 2: invalid calendar date '1990-13-40'",
                         data_error);
    std::istringstream not_iso("date,a\n05/01/1990,1\n");
    CHECK_THROWS_AS(parse_events(not_iso), data_error);
    std::istringstream ragged("date,a,b\n1990-01-05,1\n");
    CHECK_THROWS_WITH_AS(parse_events(ragged), "line 2: expected 3 columns, got 2", data_error);
    std::istringstream not_num("date,a\n1990-01-05,x\n");
    CHECK_THROWS_AS(parse_events(not_num), data_error);
}

TEST_CASE("parse_events can enforce an expected schema") {
    std::istringstream in("date,a,b\n1990-01-05,1,2\n");
    CHECK_THROWS_AS(parse_events(in, {"a", "c"}), data_error);
}

TEST_CASE("aggregate adds counts within one bin") {
    EventList events;
    events.schema = {"a", "b"};
    events.records.push_back({Date{1995, 6, 3}, {1, 2}});
    events.records.push_back({Date{1995, 6, 25}, {3, 4}});
    const ContingencyTable table =
        aggregate(events, Granularity::month, "1995-06", "1995-06");
    REQUIRE(table.row_labels == std::vector<std::string>{"1995-06"});
    CHECK(table.k(0, 0) == 4.0);
    CHECK(table.k(0, 1) == 6.0);
    CHECK(table.total == 10.0);
}

TEST_CASE("monthly aggregation of 1988-2004 yields 204 rows") {
    EventList events;
    events.schema = {"a"};
    for (int year = 1988; year <= 2004; ++year)
        for (int month = 1; month <= 12; ++month)
            events.records.push_back({Date{year, month, 15}, {1}});
    const ContingencyTable monthly =
        aggregate(events, Granularity::month, "1988-01", "2004-12");
    CHECK(monthly.k.rows() == 204);

    const ContingencyTable yearly = aggregate(events, Granularity::year, "1990", "2004");
    CHECK(yearly.k.rows() == 15);
    CHECK(yearly.k(0, 0) == 12.0);  // one event per month
}

TEST_CASE("aggregate drops empty bins with a record of the labels") {
    EventList events;
    events.schema = {"a"};
    events.records.push_back({Date{2000, 1, 1}, {2}});
    events.records.push_back({Date{2000, 3, 1}, {5}});
    const ContingencyTable table =
        aggregate(events, Granularity::month, "2000-01", "2000-04");
    CHECK(table.row_labels == std::vector<std::string>{"2000-01", "2000-03"});
    CHECK(table.dropped_rows == std::vector<std::string>{"2000-02", "2000-04"});
}

TEST_CASE("aggregate drops all-zero attribute columns") {
    EventList events;
    events.schema = {"a", "b", "c"};
    events.records.push_back({Date{2000, 1, 1}, {2, 0, 1}});
    events.records.push_back({Date{2000, 2, 1}, {1, 0, 4}});
    const ContingencyTable table =
        aggregate(events, Granularity::month, "2000-01", "2000-02");
    CHECK(table.col_labels == std::vector<std::string>{"a", "c"});
    CHECK(table.dropped_cols == std::vector<std::string>{"b"});
}

TEST_CASE("aggregate rejects empty or event-free ranges") {
    EventList events;
    events.schema = {"a"};
    events.records.push_back({Date{2000, 1, 1}, {1}});
    CHECK_THROWS_AS(aggregate(events, Granularity::month, "2000-04", "2000-01"),
                    validation_error);
    CHECK_THROWS_AS(aggregate(events, Granularity::month, "2001-01", "2001-03"), data_error);
    CHECK_THROWS_AS(aggregate(events, Granularity::month, "2000-1", "2000-02"),
                    validation_error);
}

TEST_CASE("aggregation conserves mass and ignores event order") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> month(1, 12);
    std::uniform_int_distribution<int> day(1, 28);
    std::uniform_int_distribution<int> count(0, 5);
    for (int trial = 0; trial < 20; ++trial) {
        EventList events;
        events.schema = {"a", "b", "c"};
        double mass = 0.0;
        for (int e = 0; e < 40; ++e) {
            EventRecord rec{Date{2000, month(rng), day(rng)}, {}};
            for (int j = 0; j < 3; ++j) {
                const double v = count(rng);
                rec.counts.push_back(v);
                mass += v;
            }
            events.records.push_back(std::move(rec));
        }
        const ContingencyTable table =
            aggregate(events, Granularity::month, "2000-01", "2000-12");
        CHECK(table.total == doctest::Approx(mass).epsilon(1e-12));

        EventList shuffled = events;
        std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
        const ContingencyTable again =
            aggregate(shuffled, Granularity::month, "2000-01", "2000-12");
        REQUIRE(again.row_labels == table.row_labels);
        for (std::size_t i = 0; i < table.k.rows(); ++i)
            for (std::size_t j = 0; j < table.k.cols(); ++j)
                CHECK(again.k(i, j) == table.k(i, j));
    }
}

TEST_CASE("events outside the range are excluded") {
    EventList events;
    events.schema = {"a"};
    events.records.push_back({Date{1989, 12, 31}, {7}});
    events.records.push_back({Date{1990, 1, 1}, {1}});
    const ContingencyTable table = aggregate(events, Granularity::year, "1990", "1990");
    CHECK(table.total == 1.0);
}

TEST_CASE("parse_events round-trips through write_events_csv") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> month(1, 12);
    std::uniform_int_distribution<int> day(1, 28);
    std::uniform_int_distribution<int> count(0, 30);
    EventList events;
    events.schema = {"k1", "k2", "i1"};
    for (int e = 0; e < 25; ++e)
        events.records.push_back(
            {Date{1990 + e % 5, month(rng), day(rng)},
             {double(count(rng)), double(count(rng)), double(count(rng))}});

    std::ostringstream out;
    write_events_csv(out, events);
    std::istringstream in(out.str());
    const EventList parsed = parse_events(in);
    REQUIRE(parsed.schema == events.schema);
    REQUIRE(parsed.records.size() == events.records.size());
    for (std::size_t e = 0; e < events.records.size(); ++e) {
        CHECK(parsed.records[e].date == events.records[e].date);
        CHECK(parsed.records[e].counts == events.records[e].counts);
    }
}

TEST_CASE("load_signal reads 15 yearly rows") {
    std::ostringstream src;
    src << "label,value\n";
    for (int year = 1990; year <= 2004; ++year)
        src << year << ',' << 100.0 + year - 1990 << '\n';
    std::istringstream in(src.str());
    const ExternalSignal sig = load_signal(in);
    REQUIRE(sig.values.size() == 15);
    CHECK(sig.labels.front() == "1990");
    CHECK(sig.values.back() == 114.0);
}

TEST_CASE("load_signal rejects disorder, duplicates, and bad values") {
    std::istringstream disorder("label,value\n1992,1\n1991,2\n");
    CHECK_THROWS_WITH_AS(load_signal(disorder), "line 3: labels not strictly increasing",
                         data_error);
    std::istringstream dup("label,value\n1992,1\n1992,2\n");
    CHECK_THROWS_AS(load_signal(dup), data_error);
    std::istringstream bad("label,value\n1992,abc\n");
    CHECK_THROWS_AS(load_signal(bad), data_error);
    std::istringstream empty("label,value\n");
    CHECK_THROWS_WITH_AS(load_signal(empty), "empty signal", data_error);
    std::istringstream header("time,value\n1992,1\n");
    CHECK_THROWS_AS(load_signal(header), data_error);
}

TEST_CASE("load_signal accepts a single row") {
    std::istringstream in("label,value\n1990,42.5\n");
    const ExternalSignal sig = load_signal(in);
    REQUIRE(sig.values.size() == 1);
    CHECK(sig.values[0] == 42.5);
}

TEST_CASE("load_table round-trips and drops zero rows and columns") {
    std::istringstream in(
        "label,a,b,c\n"
        "1990,1,0,2\n"
        "1991,0,0,0\n"
        "1992,3,0,4\n");
    const ContingencyTable table = load_table(in);
    CHECK(table.row_labels == std::vector<std::string>{"1990", "1992"});
    CHECK(table.dropped_rows == std::vector<std::string>{"1991"});
    CHECK(table.col_labels == std::vector<std::string>{"a", "c"});
    CHECK(table.dropped_cols == std::vector<std::string>{"b"});
    CHECK(table.total == 10.0);

    std::ostringstream out;
    write_table_csv(out, table);
    std::istringstream back(out.str());
    const ContingencyTable again = load_table(back);
    CHECK(again.row_labels == table.row_labels);
    CHECK(again.total == table.total);
    for (std::size_t i = 0; i < table.k.rows(); ++i)
        for (std::size_t j = 0; j < table.k.cols(); ++j)
            CHECK(again.k(i, j) == table.k(i, j));
}

TEST_CASE("load_table accepts fractional counts") {
    std::istringstream in("label,a,b\n1990,0.5,1.25\n1991,2,0.75\n");
    const ContingencyTable table = load_table(in);
    CHECK(table.k(0, 0) == 0.5);
    CHECK(table.total == 4.5);
}

TEST_CASE("load_table rejects unsorted labels and negatives") {
    std::istringstream unsorted("label,a\n1992,1\n1991,2\n");
    CHECK_THROWS_AS(load_table(unsorted), data_error);
    std::istringstream negative("label,a\n1990,-3\n");
    CHECK_THROWS_AS(load_table(negative), data_error);
}

TEST_SUITE_END();
