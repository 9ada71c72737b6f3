#include "ldp/data/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace ldp::data {

Dataset::Dataset(std::vector<std::string> columns, Eigen::MatrixXd values, bool discrete)
    : columns_(std::move(columns)), values_(std::move(values)), discrete_(discrete) {
    if (static_cast<Eigen::Index>(columns_.size()) != values_.cols())
        throw DataError("column count does not match value matrix");
    for (std::size_t j = 0; j < columns_.size(); ++j)
        if (!index_.emplace(columns_[j], j).second) throw DataError("duplicate column: " + columns_[j]);
    if (!values_.allFinite()) throw DataError("dataset contains missing or non-finite values");
}

std::size_t Dataset::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw DataError("unknown column: " + name);
    return it->second;
}

bool Dataset::integer_valued(std::size_t col) const {
    const auto c = values_.col(static_cast<Eigen::Index>(col));
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (c[i] != std::floor(c[i])) return false;
    return true;
}

Dataset mask_latents(const Dataset& data, const std::vector<std::string>& hidden, const std::string& exposure,
                     const std::string& outcome) {
    std::set<std::string> drop;
    for (const auto& h : hidden) {
        if (h == exposure || h == outcome) throw DataError("cannot hide the exposure or outcome: " + h);
        data.index(h);
        drop.insert(h);
    }
    if (drop.empty()) return data;

    std::vector<std::string> names;
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (drop.count(data.columns()[j])) continue;
        names.push_back(data.columns()[j]);
        keep.push_back(static_cast<Eigen::Index>(j));
    }
    Eigen::MatrixXd values(data.values().rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) values.col(static_cast<Eigen::Index>(j)) = data.values().col(keep[j]);

    Dataset out(std::move(names), std::move(values), data.discrete());
    out.seed = data.seed;
    out.provenance = data.provenance;
    out.provenance += out.provenance.empty() ? "hidden=" : ";hidden=";
    bool first = true;
    for (const auto& h : drop) {
        out.provenance += (first ? "" : "|") + h;
        first = false;
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cell));
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    out.push_back(std::move(cell));
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

Dataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("CSV is empty");
    std::vector<std::string> header;
    for (auto& h : split_csv_line(line)) header.push_back(trim(h));
    for (const auto& h : header)
        if (h.empty()) throw DataError("CSV header has an empty column name");

    std::vector<double> cells;
    std::size_t rows = 0;
    bool all_integer = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("CSV row " + std::to_string(rows + 2) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(header.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto cell = trim(fields[j]);
            double v = 0;
            const auto* end = cell.data() + cell.size();
            auto [ptr, ec] = std::from_chars(cell.data(), end, v);
            if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
                throw DataError("CSV row " + std::to_string(rows + 2) + ", column " + header[j] +
                                ": not a number: '" + cell + "'");
            all_integer = all_integer && v == std::floor(v);
            cells.push_back(v);
        }
        ++rows;
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(header.size()));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < header.size(); ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cells[i * header.size() + j];
    return Dataset(std::move(header), std::move(values), all_integer && rows > 0);
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t j = 0; j < data.cols(); ++j) out << (j ? "," : "") << data.columns()[j];
    out << '\n';
    char buf[64];
    const auto& v = data.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v(i, j));
            if (j) out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, data);
}

}  // namespace ldp::data
