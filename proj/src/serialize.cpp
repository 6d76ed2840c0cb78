#include "uwr/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

namespace uwr {

using nlohmann::ordered_json;

nlohmann::ordered_json factors_to_json(const FactorDecomposition& dec) {
    ordered_json out;
    out["eigenvalues"] = dec.eigenvalues;
    out["inertia_total"] = dec.inertia_total;
    auto entries = [&](const std::vector<std::string>& labels, const Matrix& coords) {
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < labels.size(); ++i) {
            ordered_json item;
            item["label"] = labels[i];
            item["coords"] = std::vector<double>(coords.row(i).begin(), coords.row(i).end());
            arr.push_back(std::move(item));
        }
        return arr;
    };
    out["rows"] = entries(dec.row_labels, dec.row_factors);
    out["cols"] = entries(dec.col_labels, dec.col_factors);
    return out;
}

FactorTable parse_factors_json(std::istream& in) {
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw data_error(std::string("factors JSON: ") + e.what());
    }
    if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty())
        throw data_error("factors JSON: missing rows");

    FactorTable table;
    if (j.contains("eigenvalues")) table.eigenvalues = j["eigenvalues"].get<std::vector<double>>();
    const auto& rows = j["rows"];
    const std::size_t width = rows.front().at("coords").size();
    table.coords = Matrix(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.labels.push_back(rows[i].at("label").get<std::string>());
        const auto coords = rows[i].at("coords").get<std::vector<double>>();
        if (coords.size() != width) throw data_error("factors JSON: ragged coords");
        for (std::size_t a = 0; a < width; ++a) table.coords(i, a) = coords[a];
    }
    return table;
}

nlohmann::ordered_json dendrogram_to_json(const Dendrogram& tree) {
    ordered_json out;
    out["n_leaves"] = tree.n_leaves();
    out["leaves"] = tree.leaf_labels;
    ordered_json nodes = ordered_json::array();
    for (std::size_t q = 0; q < tree.merges.size(); ++q) {
        const DendroNode& node = tree.merges[q];
        ordered_json item;
        item["id"] = tree.n_leaves() + static_cast<int>(q);
        item["left"] = node.left;
        item["right"] = node.right;
        item["height"] = node.height;
        item["span"] = {node.span_lo, node.span_hi};
        nodes.push_back(std::move(item));
    }
    out["nodes"] = std::move(nodes);
    out["root"] = tree.root_id();
    return out;
}

Dendrogram dendrogram_from_json(std::istream& in) {
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw data_error(std::string("dendrogram JSON: ") + e.what());
    }

    Dendrogram tree;
    try {
        tree.leaf_labels = j.at("leaves").get<std::vector<std::string>>();
        const int n = j.at("n_leaves").get<int>();
        if (n != tree.n_leaves()) throw data_error("dendrogram JSON: leaf count mismatch");
        std::vector<ordered_json> nodes(j.at("nodes").begin(), j.at("nodes").end());
        std::sort(nodes.begin(), nodes.end(), [](const ordered_json& a, const ordered_json& b) {
            return a.at("id").get<int>() < b.at("id").get<int>();
        });
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const auto& item = nodes[q];
            if (item.at("id").get<int>() != n + static_cast<int>(q))
                throw data_error("dendrogram JSON: node ids must be n..2n-2");
            DendroNode node;
            node.left = item.at("left").get<int>();
            node.right = item.at("right").get<int>();
            node.height = item.at("height").get<double>();
            node.span_lo = item.at("span").at(0).get<int>();
            node.span_hi = item.at("span").at(1).get<int>();
            tree.merges.push_back(node);
        }
        if (j.at("root").get<int>() != tree.root_id())
            throw data_error("dendrogram JSON: root must be the last node");
    } catch (const ordered_json::exception& e) {
        throw data_error(std::string("dendrogram JSON: ") + e.what());
    }
    tree.validate();
    return tree;
}

LabeledMatrix load_labeled_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty input: no header");
    auto split = [](const std::string& text) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = text.find(',', start);
            std::string field = pos == std::string::npos ? text.substr(start)
                                                         : text.substr(start, pos - start);
            while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
                field.pop_back();
            while (!field.empty() && field.front() == ' ') field.erase(field.begin());
            fields.push_back(std::move(field));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return fields;
    };

    auto header = split(line);
    if (header.size() < 2) throw data_error("need a label column and at least one value column");

    LabeledMatrix out;
    out.col_names.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != header.size())
            throw data_error("line " + std::to_string(line_no) + ": column count mismatch");
        out.labels.push_back(fields[0]);
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            double v = 0.0;
            auto [ptr, ec] =
                std::from_chars(fields[j].data(), fields[j].data() + fields[j].size(), v);
            if (ec != std::errc() || ptr != fields[j].data() + fields[j].size())
                throw data_error("line " + std::to_string(line_no) + ": non-numeric value '" +
                                 fields[j] + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("no data rows");
    out.values = Matrix(rows.size(), out.col_names.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < out.col_names.size(); ++j) out.values(i, j) = rows[i][j];
    return out;
}

void write_fit_csv(std::ostream& out, const ExternalSignal& signal, const PiecewiseFit& fit) {
    out << "label,original,fitted\n";
    for (std::size_t i = 0; i < signal.values.size(); ++i)
        out << signal.labels[i] << ',' << format_double(signal.values[i]) << ','
            << format_double(fit.fitted[i]) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& entries) {
    out << "keep,mse\n";
    for (const auto& entry : entries)
        out << entry.keep << ',' << format_double(entry.mse) << '\n';
}

void write_sweep_fits_csv(std::ostream& out, const ExternalSignal& signal,
                          const std::vector<SweepEntry>& entries) {
    out << "label,original";
    for (const auto& entry : entries) out << ",k" << entry.keep;
    out << '\n';
    for (std::size_t i = 0; i < signal.values.size(); ++i) {
        out << signal.labels[i] << ',' << format_double(signal.values[i]);
        for (const auto& entry : entries) out << ',' << format_double(entry.fit.fitted[i]);
        out << '\n';
    }
}

}  // namespace uwr
