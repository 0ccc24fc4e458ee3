#include "repclust/features_io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace repclust {

const char* to_string(FormatErrorKind kind) noexcept {
    switch (kind) {
        case FormatErrorKind::malformed: return "malformed";
        case FormatErrorKind::non_finite: return "non-finite value";
        case FormatErrorKind::row_length_mismatch: return "row length mismatch";
        case FormatErrorKind::label_out_of_range: return "label out of range";
        case FormatErrorKind::truncated: return "truncated";
    }
    return "unknown";
}

namespace {

std::string locate(std::size_t row, std::size_t col) {
    std::string s;
    if (row != FormatError::npos) s += " at row " + std::to_string(row);
    if (col != FormatError::npos) s += (row != FormatError::npos ? ", column " : " at column ") +
                                       std::to_string(col);
    return s;
}

}  // namespace

FormatError::FormatError(FormatErrorKind kind, const std::string& path, const std::string& what,
                         std::size_t row, std::size_t col)
    : IoError(path, std::string(to_string(kind)) + ": " + what + locate(row, col)),
      kind_(kind),
      row_(row),
      col_(col) {}

FeatureMatrix::FeatureMatrix(Matrix data, bool unit_normalized)
    : data_(std::move(data)), unit_normalized_(unit_normalized) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw InvalidArgument("feature matrix must have at least one row and one column");
    for (Eigen::Index i = 0; i < data_.rows(); ++i)
        for (Eigen::Index j = 0; j < data_.cols(); ++j)
            if (!std::isfinite(data_(i, j)))
                throw InvalidArgument("non-finite feature at row " + std::to_string(i) +
                                      ", column " + std::to_string(j));
    if (unit_normalized_) {
        for (Eigen::Index i = 0; i < data_.rows(); ++i)
            if (std::abs(data_.row(i).norm() - 1.0) > 1e-9)
                throw InvalidArgument("row " + std::to_string(i) +
                                      " is flagged unit-normalized but has norm " +
                                      std::to_string(data_.row(i).norm()));
    }
}

LabelVector::LabelVector(std::vector<std::uint32_t> labels, std::size_t num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
    std::size_t inferred = 0;
    for (auto l : labels_) inferred = std::max<std::size_t>(inferred, std::size_t{l} + 1);
    if (num_classes_ == 0) {
        num_classes_ = inferred;
    } else if (inferred > num_classes_) {
        throw InvalidArgument("label " + std::to_string(inferred - 1) + " outside [0, " +
                              std::to_string(num_classes_) + ")");
    }
}

std::vector<std::size_t> LabelVector::class_counts() const {
    std::vector<std::size_t> counts(num_classes_, 0);
    for (auto l : labels_) ++counts[l];
    return counts;
}

void LabelVector::require_all_classes_present() const {
    const auto counts = class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0) throw InvalidArgument("class " + std::to_string(c) + " has no points");
}

Dataset::Dataset(FeatureMatrix f, LabelVector l, std::string n,
                 std::map<std::string, std::string> p)
    : features(std::move(f)), labels(std::move(l)), name(std::move(n)), provenance(std::move(p)) {
    if (!labels.empty() && labels.size() != features.rows())
        throw InvalidArgument("dataset has " + std::to_string(features.rows()) + " rows but " +
                              std::to_string(labels.size()) + " labels");
}

FileFormat parse_file_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "binary" || name == "bin") return FileFormat::binary;
    throw InvalidArgument("unknown file format '" + name + "' (expected csv or binary)");
}

const char* to_string(FileFormat format) noexcept {
    return format == FileFormat::csv ? "csv" : "binary";
}

namespace {

constexpr std::array<char, 4> kMagic{'R', 'P', 'C', '1'};
constexpr std::size_t kHeaderBytes = 4 + 3 * 8;

void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

void put_f64(std::string& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    put_u64(out, bits);
}

double get_f64(const unsigned char* p) {
    const std::uint64_t bits = get_u64(p);
    double x;
    std::memcpy(&x, &bits, sizeof x);
    return x;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, std::string("cannot open for reading: ") + std::strerror(errno));
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(path, "read failed");
    return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, std::string("cannot open for writing: ") + std::strerror(errno));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

struct RawTable {
    Matrix features;
    std::vector<std::uint32_t> labels;
    std::size_t num_classes = 0;  // 0 = unlabeled (binary) or inferred (csv)
    bool labeled = false;
};

RawTable parse_binary(const std::string& path, const std::string& bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < kHeaderBytes) {
        if (bytes.size() >= 4 && std::memcmp(p, kMagic.data(), 4) != 0)
            throw FormatError(FormatErrorKind::malformed, path, "bad magic bytes");
        throw FormatError(FormatErrorKind::truncated, path,
                          "header needs " + std::to_string(kHeaderBytes) + " bytes, file has " +
                              std::to_string(bytes.size()));
    }
    if (std::memcmp(p, kMagic.data(), 4) != 0)
        throw FormatError(FormatErrorKind::malformed, path, "bad magic bytes");
    const std::uint64_t n = get_u64(p + 4);
    const std::uint64_t d = get_u64(p + 12);
    const std::uint64_t c = get_u64(p + 20);
    if (n == 0 || d == 0)
        throw FormatError(FormatErrorKind::malformed, path, "header declares an empty matrix");
    if (d > (UINT64_MAX / 8) / n || c > UINT32_MAX)
        throw FormatError(FormatErrorKind::malformed, path, "header dimensions overflow");

    const std::uint64_t values = n * d;
    const std::uint64_t expected = kHeaderBytes + 8 * values + (c > 0 ? 4 * n : 0);
    const std::uint64_t payload = bytes.size() - kHeaderBytes;
    if (bytes.size() < expected) {
        const std::uint64_t have_values = std::min<std::uint64_t>(values, payload / 8);
        throw FormatError(FormatErrorKind::truncated, path,
                          "header declares n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                              " but payload holds " + std::to_string(have_values) +
                              " feature values" +
                              (have_values == values ? " and incomplete labels" : ""));
    }
    if (bytes.size() > expected)
        throw FormatError(FormatErrorKind::malformed, path,
                          std::to_string(bytes.size() - expected) + " trailing bytes");

    RawTable t;
    t.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const unsigned char* q = p + kHeaderBytes;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < d; ++j, q += 8) {
            const double x = get_f64(q);
            if (!std::isfinite(x))
                throw FormatError(FormatErrorKind::non_finite, path, "feature is not finite", i, j);
            t.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
        }
    }
    if (c > 0) {
        t.labeled = true;
        t.num_classes = c;
        t.labels.resize(n);
        for (std::uint64_t i = 0; i < n; ++i, q += 4) {
            const std::uint32_t l = get_u32(q);
            if (l >= c)
                throw FormatError(FormatErrorKind::label_out_of_range, path,
                                  "label " + std::to_string(l) + " not in [0, " +
                                      std::to_string(c) + ")",
                                  i, d);
            t.labels[i] = l;
        }
    }
    return t;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

RawTable parse_csv(const std::string& path, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    std::uint64_t hn = 0, hd = 0, hc = 0;
    std::vector<std::vector<double>> rows;
    std::vector<long long> labels;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool first_content = true;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (!first_content)
                throw FormatError(FormatErrorKind::malformed, path,
                                  "header must be the first line (line " +
                                      std::to_string(line_no) + ")");
            std::istringstream hs(t.substr(1));
            if (!(hs >> hn >> hd >> hc) || hn == 0 || hd == 0)
                throw FormatError(FormatErrorKind::malformed, path,
                                  "header must read '# n d C' with n, d ≥ 1");
            std::string rest;
            if (hs >> rest)
                throw FormatError(FormatErrorKind::malformed, path, "unexpected header token");
            have_header = true;
            first_content = false;
            width = hc > 0 ? hd + 1 : hd;
            continue;
        }
        first_content = false;
        const std::size_t row = rows.size();
        const auto fields = split_fields(t);
        if (width == 0) {
            width = fields.size();
            if (width < 2)
                throw FormatError(FormatErrorKind::malformed, path,
                                  "expected at least one feature and a label column", row);
        }
        if (fields.size() != width)
            throw FormatError(FormatErrorKind::row_length_mismatch, path,
                              "expected " + std::to_string(width) + " fields, found " +
                                  std::to_string(fields.size()),
                              row, std::min(fields.size(), width));
        const bool labeled = !have_header || hc > 0;
        const std::size_t nfeat = labeled ? width - 1 : width;
        std::vector<double> values(nfeat);
        for (std::size_t j = 0; j < nfeat; ++j) {
            const std::string& f = fields[j];
            if (f.empty())
                throw FormatError(FormatErrorKind::malformed, path, "empty field", row, j);
            errno = 0;
            char* end = nullptr;
            const double x = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0')
                throw FormatError(FormatErrorKind::malformed, path, "'" + f + "' is not a number",
                                  row, j);
            if (!std::isfinite(x))
                throw FormatError(FormatErrorKind::non_finite, path, "'" + f + "' is not finite",
                                  row, j);
            values[j] = x;
        }
        if (labeled) {
            const std::string& f = fields[nfeat];
            char* end = nullptr;
            errno = 0;
            const long long l = std::strtoll(f.c_str(), &end, 10);
            if (f.empty() || end == f.c_str() || *end != '\0' || errno == ERANGE)
                throw FormatError(FormatErrorKind::malformed, path,
                                  "label '" + f + "' is not an integer", row, nfeat);
            if (l < 0 || l > static_cast<long long>(UINT32_MAX) ||
                (have_header && static_cast<unsigned long long>(l) >= hc))
                throw FormatError(FormatErrorKind::label_out_of_range, path,
                                  "label " + f + " out of range", row, nfeat);
            labels.push_back(l);
        }
        rows.push_back(std::move(values));
    }

    if (rows.empty()) throw FormatError(FormatErrorKind::malformed, path, "no data rows");
    if (have_header) {
        if (rows.size() < hn)
            throw FormatError(FormatErrorKind::truncated, path,
                              "header declares " + std::to_string(hn) + " rows, found " +
                                  std::to_string(rows.size()));
        if (rows.size() > hn)
            throw FormatError(FormatErrorKind::malformed, path,
                              "header declares " + std::to_string(hn) + " rows, found " +
                                  std::to_string(rows.size()));
    }

    RawTable t;
    const std::size_t d = rows.front().size();
    t.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            t.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    t.labeled = !labels.empty();
    t.num_classes = have_header ? hc : 0;
    t.labels.reserve(labels.size());
    for (auto l : labels) t.labels.push_back(static_cast<std::uint32_t>(l));
    return t;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string encode_binary(const Matrix& m, const std::vector<std::uint32_t>* labels,
                          std::size_t num_classes) {
    std::string out(kMagic.begin(), kMagic.end());
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
    put_u64(out, labels ? num_classes : 0);
    out.reserve(out.size() + static_cast<std::size_t>(m.size()) * 8 +
                (labels ? labels->size() * 4 : 0));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) put_f64(out, m(i, j));
    if (labels)
        for (auto l : *labels) put_u32(out, l);
    return out;
}

std::string encode_csv(const Matrix& m, const std::vector<std::uint32_t>* labels,
                       std::size_t num_classes) {
    std::string out = "# " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
                      std::to_string(labels ? num_classes : 0) + "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        if (labels) {
            out += ',';
            out += std::to_string((*labels)[static_cast<std::size_t>(i)]);
        }
        out += '\n';
    }
    return out;
}

RawTable read_table(const std::string& path, FileFormat format) {
    const std::string bytes = read_file(path);
    return format == FileFormat::binary ? parse_binary(path, bytes) : parse_csv(path, bytes);
}

}  // namespace

Dataset load_dataset(const std::string& path, FileFormat format) {
    RawTable t = read_table(path, format);
    FeatureMatrix features(std::move(t.features));
    LabelVector labels;
    if (t.labeled) labels = LabelVector(std::move(t.labels), t.num_classes);
    Dataset ds(std::move(features), std::move(labels));
    const auto slash = path.find_last_of('/');
    ds.name = slash == std::string::npos ? path : path.substr(slash + 1);
    ds.provenance["source"] = path;
    ds.provenance["format"] = to_string(format);
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& path, FileFormat format) {
    const auto* labels = ds.labeled() ? &ds.labels.values() : nullptr;
    const std::size_t c = ds.labeled() ? ds.labels.num_classes() : 0;
    write_file(path, format == FileFormat::binary ? encode_binary(ds.features.data(), labels, c)
                                                  : encode_csv(ds.features.data(), labels, c));
}

void save_matrix(const Matrix& m, const std::string& path, FileFormat format) {
    write_file(path, format == FileFormat::binary ? encode_binary(m, nullptr, 0)
                                                  : encode_csv(m, nullptr, 0));
}

Matrix load_matrix(const std::string& path, FileFormat format) {
    RawTable t = read_table(path, format);
    if (t.labeled)
        throw FormatError(FormatErrorKind::malformed, path,
                          "expected an unlabeled matrix (header C = 0)");
    return std::move(t.features);
}

FeatureMatrix normalize_rows(const FeatureMatrix& m) {
    Matrix out = m.data();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (!(norm > 0.0))
            throw ComputationError("cannot normalize zero-norm row " + std::to_string(i));
        out.row(i) /= norm;
    }
    return FeatureMatrix(std::move(out), true);
}

}  // namespace repclust
