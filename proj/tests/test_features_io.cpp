#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "repclust/features_io.hpp"

using namespace repclust;

namespace {

std::string write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream(p) << body;
    return p.string();
}

template <class Fn>
FormatError capture_format_error(Fn&& fn) {
    try {
        fn();
    } catch (const FormatError& e) {
        return e;
    }
    FAIL("expected a FormatError");
    return FormatError(FormatErrorKind::malformed, "", "");
}

void put_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }

}  // namespace

TEST_CASE("csv with two labeled rows") {
    const auto dir = oracle::scratch_dir("fio");
    const auto path = write_text(dir / "a.csv", "0.0,1.0,0\n1.0,0.0,1\n");
    const Dataset ds = load_dataset(path, FileFormat::csv);
    CHECK(ds.features.rows() == 2);
    CHECK(ds.features.cols() == 2);
    CHECK(ds.labels.num_classes() == 2);
    CHECK(ds.features(0, 1) == 1.0);
    CHECK(ds.labels[1] == 1);
}

TEST_CASE("csv header overrides the inferred class count") {
    const auto dir = oracle::scratch_dir("fio");
    const auto path = write_text(dir / "h.csv", "# 2 2 5\n0.0,1.0,0\n1.0,0.0,1\n");
    CHECK(load_dataset(path, FileFormat::csv).labels.num_classes() == 5);
}

TEST_CASE("csv validation errors carry a kind and location") {
    const auto dir = oracle::scratch_dir("fio");

    auto e = capture_format_error([&] {
        load_dataset(write_text(dir / "nan.csv", "0.0,1.0,0\n1.0,nan,1\n"), FileFormat::csv);
    });
    CHECK(e.kind() == FormatErrorKind::non_finite);
    CHECK(e.row() == 1);
    CHECK(e.col() == 1);

    e = capture_format_error([&] {
        load_dataset(write_text(dir / "ragged.csv", "0.0,1.0,0\n1.0,0\n"), FileFormat::csv);
    });
    CHECK(e.kind() == FormatErrorKind::row_length_mismatch);
    CHECK(e.row() == 1);

    e = capture_format_error([&] {
        load_dataset(write_text(dir / "range.csv", "# 2 2 2\n0.0,1.0,0\n1.0,0.0,2\n"), FileFormat::csv);
    });
    CHECK(e.kind() == FormatErrorKind::label_out_of_range);
    CHECK(e.row() == 1);

    e = capture_format_error([&] {
        load_dataset(write_text(dir / "junk.csv", "0.0,abc,0\n"), FileFormat::csv);
    });
    CHECK(e.kind() == FormatErrorKind::malformed);
    CHECK(e.col() == 1);
}

TEST_CASE("binary file shorter than its header is a truncation error") {
    const auto dir = oracle::scratch_dir("fio");
    const auto path = (dir / "short.bin").string();
    {
        std::ofstream out(path, std::ios::binary);
        out.write("RPC1", 4);
        put_u64(out, 4);
        put_u64(out, 3);
        put_u64(out, 0);
        for (int i = 0; i < 11; ++i) {
            const double v = i;
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
    }
    const auto e = capture_format_error([&] { load_dataset(path, FileFormat::binary); });
    CHECK(e.kind() == FormatErrorKind::truncated);
}

TEST_CASE("bad magic is malformed") {
    const auto dir = oracle::scratch_dir("fio");
    const auto path = write_text(dir / "bad.bin", "NOPE0000000000000000000000000000");
    CHECK(capture_format_error([&] { load_dataset(path, FileFormat::binary); }).kind() ==
          FormatErrorKind::malformed);
}

TEST_CASE("missing file raises IoError naming the path") {
    try {
        load_dataset("/nonexistent/dir/x.csv", FileFormat::csv);
        FAIL("no throw");
    } catch (const IoError& e) {
        CHECK(e.path() == "/nonexistent/dir/x.csv");
        CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
    }
}

TEST_CASE("normalize_rows examples") {
    Matrix m(2, 2);
    m << 3, 4, 1, 0;
    const FeatureMatrix n = normalize_rows(FeatureMatrix(m));
    CHECK(n.unit_normalized());
    CHECK(n(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(n(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(n(1, 0) == 1.0);
    CHECK(n(1, 1) == 0.0);

    Matrix z(2, 2);
    z << 1, 1, 0, 0;
    try {
        normalize_rows(FeatureMatrix(z));
        FAIL("no throw");
    } catch (const ComputationError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("normalize_rows properties on random matrices") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = oracle::random_matrix(gen, 7, 5);
        const FeatureMatrix once = normalize_rows(FeatureMatrix(m));
        const FeatureMatrix twice = normalize_rows(once);
        const FeatureMatrix scaled = normalize_rows(FeatureMatrix(Matrix(m * 37.5)));
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(std::abs(once.data().row(Eigen::Index(i)).norm() - 1.0) < 1e-12);
            // direction preserved: positive multiple of the original row
            CHECK(once.data().row(Eigen::Index(i)).dot(m.row(Eigen::Index(i))) > 0.0);
        }
        CHECK((once.data() - twice.data()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((once.data() - scaled.data()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("FeatureMatrix invariants") {
    Matrix m(1, 2);
    m << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(FeatureMatrix{m}, InvalidArgument);
    CHECK_THROWS_AS(FeatureMatrix(Matrix(0, 3)), InvalidArgument);
    Matrix u(1, 2);
    u << 1.0, 1.0;
    CHECK_THROWS_AS(FeatureMatrix(u, true), InvalidArgument);
    CHECK_THROWS_AS(LabelVector({0, 3}, 2), InvalidArgument);
    CHECK_THROWS_AS(LabelVector({0, 2}).require_all_classes_present(), InvalidArgument);
}

TEST_CASE("binary round trip is bit exact") {
    const auto dir = oracle::scratch_dir("fio");
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rows = Eigen::Index(1 + gen() % 30), cols = Eigen::Index(1 + gen() % 9);
        Matrix m = oracle::random_matrix(gen, rows, cols, 1e3);
        m(0, 0) = std::numeric_limits<double>::denorm_min();
        const auto path = (dir / ("m" + std::to_string(trial) + ".bin")).string();
        save_matrix(m, path, FileFormat::binary);
        const Matrix back = load_matrix(path, FileFormat::binary);
        REQUIRE(back.rows() == rows);
        REQUIRE(back.cols() == cols);
        CHECK(std::memcmp(back.data(), m.data(), sizeof(double) * std::size_t(m.size())) == 0);
    }
}

TEST_CASE("labeled dataset round trips in both formats") {
    const auto dir = oracle::scratch_dir("fio");
    std::mt19937_64 gen(8);
    const Matrix m = oracle::random_matrix(gen, 12, 3);
    const Dataset ds(FeatureMatrix(m), LabelVector(oracle::random_labels(gen, 12, 3), 4));
    for (auto fmt : {FileFormat::binary, FileFormat::csv}) {
        const auto path = (dir / (std::string("d.") + to_string(fmt))).string();
        save_dataset(ds, path, fmt);
        const Dataset back = load_dataset(path, fmt);
        CHECK(back.labels.values() == ds.labels.values());
        CHECK(back.labels.num_classes() == 4);
        CHECK((back.features.data() - m).cwiseAbs().maxCoeff() <= 1e-15 * m.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("csv round trip of 0.1") {
    const auto dir = oracle::scratch_dir("fio");
    Matrix m(1, 1);
    m << 0.1;
    const auto path = (dir / "p.csv").string();
    save_matrix(m, path, FileFormat::csv);
    CHECK(std::abs(load_matrix(path, FileFormat::csv)(0, 0) - 0.1) <= 1e-15 * 0.1);
}

TEST_CASE("saving to an unwritable path raises IoError") {
    Matrix m = Matrix::Ones(2, 2);
    CHECK_THROWS_AS(save_matrix(m, "/nonexistent/dir/out.bin", FileFormat::binary), IoError);
    CHECK_THROWS_AS(save_matrix(m, "/nonexistent/dir/out.csv", FileFormat::csv), IoError);
}

TEST_CASE("format names") {
    CHECK(parse_file_format("csv") == FileFormat::csv);
    CHECK(parse_file_format("binary") == FileFormat::binary);
    CHECK_THROWS_AS(parse_file_format("xml"), InvalidArgument);
}
