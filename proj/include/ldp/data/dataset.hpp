#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace ldp::data {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// n x p matrix of observations with named columns.
///
/// Discrete processes store integer values in the double matrix; `discrete()` records that
/// the values are meant as categories.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> columns, Eigen::MatrixXd values, bool discrete = false);

    const std::vector<std::string>& columns() const { return columns_; }
    const Eigen::MatrixXd& values() const { return values_; }
    std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const { return columns_.size(); }
    bool discrete() const { return discrete_; }

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    std::size_t index(const std::string& name) const;
    Eigen::VectorXd column(const std::string& name) const { return values_.col(static_cast<Eigen::Index>(index(name))); }

    /// True iff every entry of the column is a whole number.
    bool integer_valued(std::size_t col) const;

    std::optional<std::uint64_t> seed;
    std::string provenance;

private:
    std::vector<std::string> columns_;
    std::unordered_map<std::string, std::size_t> index_;
    Eigen::MatrixXd values_;
    bool discrete_ = false;
};

/// Drops the hidden columns. Throws DataError if a hidden name is unknown or is the exposure
/// or outcome.
Dataset mask_latents(const Dataset& data, const std::vector<std::string>& hidden, const std::string& exposure,
                     const std::string& outcome);

/// CSV with a header row and numeric cells. A dataset whose cells are all integers is
/// marked discrete.
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace ldp::data
