#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fism/data_io.hpp>
#include <fism/random.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace fism;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> header(std::uint32_t magic, std::vector<std::uint32_t> dims) {
    std::vector<std::uint8_t> out;
    auto put = [&](std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> s));
    };
    put(magic);
    for (auto d : dims)
        put(d);
    return out;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fism_io_" + std::to_string(CounterRng(std::random_device{}()).next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("parse_idx headers") {
    auto images = header(0x803, {2, 28, 28});
    images.resize(images.size() + 2 * 784, 7);
    auto t = parse_idx(images);
    CHECK(t.dims == std::vector<std::uint32_t>{2, 28, 28});
    CHECK(t.values.size() == 2 * 784);

    auto labels = header(0x801, {5});
    labels.insert(labels.end(), {0, 1, 2, 3, 4});
    auto l = parse_idx(labels);
    CHECK(l.dims == std::vector<std::uint32_t>{5});
    CHECK(l.values == std::vector<std::uint8_t>{0, 1, 2, 3, 4});
}

TEST_CASE("parse_idx rejects bad input") {
    auto wrong = header(0x802, {2, 2});
    wrong.resize(wrong.size() + 4);
    CHECK_THROWS_AS(parse_idx(wrong), FormatError);

    auto truncated = header(0x801, {5});
    truncated.insert(truncated.end(), {1, 2});
    CHECK_THROWS_AS(parse_idx(truncated), FormatError);

    auto short_dims = header(0x803, {2});
    CHECK_THROWS_AS(parse_idx(short_dims), FormatError);

    std::vector<std::uint8_t> tiny{0, 0};
    CHECK_THROWS_AS(parse_idx(tiny), FormatError);
}

TEST_CASE("IDX round trip through encode and files") {
    IdxTensor t{{3, 2, 4}, {}};
    for (int i = 0; i < 24; ++i)
        t.values.push_back(static_cast<std::uint8_t>(i * 11));
    auto back = parse_idx(encode_idx(t));
    CHECK(back.dims == t.dims);
    CHECK(back.values == t.values);

    TempDir dir;
    write_idx(dir.path / "t.idx", t);
    auto read = read_idx(dir.path / "t.idx");
    CHECK(read.dims == t.dims);
    CHECK(read.values == t.values);
    CHECK_THROWS_AS(read_idx(dir.path / "missing.idx"), FormatError);
}

TEST_CASE("load_mnist scales pixels into [0, 1]") {
    TempDir dir;
    IdxTensor images{{3, 2, 2}, {0, 255, 128, 1, 10, 20, 30, 40, 255, 255, 0, 0}};
    IdxTensor labels{{3}, {4, 1, 0}};
    write_idx(dir.path / "img", images);
    write_idx(dir.path / "lab", labels);
    auto ds = load_mnist(dir.path / "img", dir.path / "lab");
    REQUIRE(ds.features.size() == 3);
    CHECK(ds.digits == std::vector<int>{4, 1, 0});
    CHECK(ds.features[0][1] == 1.0);
    CHECK(ds.features[0][2] == doctest::Approx(128.0 / 255.0));
    for (const auto &row : ds.features)
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

    IdxTensor fewer{{2}, {1, 0}};
    write_idx(dir.path / "lab2", fewer);
    CHECK_THROWS_AS(load_mnist(dir.path / "img", dir.path / "lab2"), FormatError);
    CHECK_THROWS_AS(load_mnist(dir.path / "lab", dir.path / "img"), FormatError);
}

TEST_CASE("filter_binary") {
    DigitDataset d;
    d.digits = {0, 1, 7, 0};
    for (int i = 0; i < 4; ++i)
        d.features.push_back(Vector{static_cast<double>(i)});
    auto b = filter_binary(d, 1, 0);
    CHECK(b.labels == std::vector<int>{-1, 1, -1});
    CHECK(b.features[2] == Vector{3.0});

    auto only = filter_binary(d, 7, 5);
    CHECK(only.labels == std::vector<int>{1});

    CHECK_THROWS_AS(filter_binary(d, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(filter_binary(d, 8, 9), FormatError);
}

TEST_CASE("CSV datasets") {
    std::istringstream crlf("label,f0,f1\r\n1,0.5,-2\r\n-1,3,4\r\n");
    auto ds = read_csv_dataset(crlf);
    CHECK(ds.labels == std::vector<int>{1, -1});
    CHECK(ds.features[1] == Vector{3, 4});

    std::ostringstream out;
    write_csv_dataset(ds, out);
    std::istringstream again(out.str());
    auto back = read_csv_dataset(again);
    CHECK(back.labels == ds.labels);
    CHECK(back.features == ds.features);

    std::istringstream bad_label("label,f0\n2,1\n");
    CHECK_THROWS_AS(read_csv_dataset(bad_label), FormatError);
    std::istringstream ragged("label,f0,f1\n1,1\n");
    CHECK_THROWS_AS(read_csv_dataset(ragged), FormatError);
    std::istringstream no_header("1,1\n");
    CHECK_THROWS_AS(read_csv_dataset(no_header), FormatError);
}

TEST_CASE("make_synthetic_logistic") {
    auto a = make_synthetic_logistic(2, 4, 0.5, 42);
    auto b = make_synthetic_logistic(2, 4, 0.5, 42);
    CHECK(a.train.features == b.train.features);
    CHECK(a.train.labels == b.train.labels);
    CHECK(a.w_star == b.w_star);

    auto s = make_synthetic_logistic(20, 401, 0.5, 7, 100);
    CHECK(s.train.size() == 401);
    CHECK(s.test.size() == 100);
    int pos = 0;
    for (int y : s.train.labels)
        pos += y > 0;
    CHECK(pos == 201);

    double wn = 0;
    for (double w : s.w_star)
        wn += w * w;
    wn = std::sqrt(wn);
    for (const auto *set : {&s.train, &s.test})
        for (std::size_t i = 0; i < set->size(); ++i) {
            double dot = 0;
            for (std::size_t d = 0; d < 20; ++d)
                dot += s.w_star[d] * set->features[i][d];
            CHECK(std::abs(dot) / wn >= 0.5);
            CHECK((dot > 0 ? 1 : -1) == set->labels[i]);
        }
}

TEST_CASE("make_location_instance") {
    auto a = make_location_instance(3, 5, 9);
    auto b = make_location_instance(3, 5, 9);
    CHECK(a.centers == b.centers);
    CHECK(a.radii == b.radii);
    CHECK(a.anchor == b.anchor);

    auto tiny = make_location_instance(1, 1, 1);
    REQUIRE(tiny.centers.size() == 1);
    CHECK(std::abs(tiny.anchor[0]) < 10.0);
    CHECK(std::abs(tiny.centers[0][0]) < 10.0);
    CHECK(tiny.radii[0] > 0.0);
    CHECK(tiny.radii[0] < 1.0);
    CHECK(tiny.box.lo() == Vector{-10.0});
}
