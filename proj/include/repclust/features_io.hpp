#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repclust/error.hpp"
#include "repclust/linalg.hpp"

namespace repclust {

/// n×d matrix of finite 64-bit representations.
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    /// Validates shape (n, d ≥ 1) and finiteness. When unit_normalized is
    /// set every row must have norm 1 within 1e-9.
    explicit FeatureMatrix(Matrix data, bool unit_normalized = false);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }
    const Matrix& data() const noexcept { return data_; }
    bool unit_normalized() const noexcept { return unit_normalized_; }

    double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Matrix data_;
    bool unit_normalized_ = false;
};

class LabelVector {
public:
    LabelVector() = default;

    /// num_classes = 0 infers max(label) + 1. Labels ≥ num_classes throw.
    explicit LabelVector(std::vector<std::uint32_t> labels, std::size_t num_classes = 0);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t num_classes() const noexcept { return num_classes_; }
    std::uint32_t operator[](std::size_t i) const { return labels_[i]; }
    const std::vector<std::uint32_t>& values() const noexcept { return labels_; }

    std::vector<std::size_t> class_counts() const;

    /// Throws InvalidArgument if any class in [0, C) is unused.
    void require_all_classes_present() const;

private:
    std::vector<std::uint32_t> labels_;
    std::size_t num_classes_ = 0;
};

struct Dataset {
    FeatureMatrix features;
    LabelVector labels;  // empty for unlabeled data
    std::string name;
    std::map<std::string, std::string> provenance;

    Dataset() = default;
    Dataset(FeatureMatrix f, LabelVector l, std::string n = {},
            std::map<std::string, std::string> p = {});

    bool labeled() const noexcept { return !labels.empty(); }
};

enum class FileFormat { csv, binary };

FileFormat parse_file_format(const std::string& name);
const char* to_string(FileFormat format) noexcept;

/// Reads a dataset in either format.
///
/// Binary: "RPC1", u64 n, u64 d, u64 C (0 = unlabeled), n·d little-endian
/// f64 features row-major, then n little-endian u32 labels when C > 0.
///
/// CSV: one point per line, features followed by an integer label column.
/// An optional first line "# n d C" fixes the shape and class count;
/// C = 0 in the header marks an unlabeled file with no label column.
/// Without a header num_classes is inferred as max(label) + 1.
Dataset load_dataset(const std::string& path, FileFormat format);

void save_dataset(const Dataset& ds, const std::string& path, FileFormat format);

/// Unlabeled matrix persistence; the file layout is the C = 0 case above.
void save_matrix(const Matrix& m, const std::string& path, FileFormat format);
Matrix load_matrix(const std::string& path, FileFormat format);

/// Scales every row to unit Euclidean norm. Throws ComputationError naming
/// the first zero-norm row.
FeatureMatrix normalize_rows(const FeatureMatrix& m);

}  // namespace repclust
