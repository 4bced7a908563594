#include <doctest.h>

#include <fstream>
#include <random>
#include <string>

#include "isoproxim/errors.hpp"
#include "isoproxim/io.hpp"
#include "support.hpp"

using namespace isoproxim;
using testsupport::random_complex;

TEST_CASE("matrix json round trip is exact") {
    std::mt19937_64 rng(401);
    const Matrix m = random_complex(rng, 3, 4);
    const Matrix back = io::matrix_from_json(io::matrix_to_json(m));
    REQUIRE(back.same_shape(m));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));

    // Serialization is byte-stable.
    CHECK(io::matrix_to_json(m) == io::matrix_to_json(back));
}

TEST_CASE("matrix json validation") {
    CHECK_THROWS_AS(io::matrix_from_json("not json"), InputError);
    CHECK_THROWS_AS(io::matrix_from_json("{\"rows\":1,\"cols\":1}"), InputError);
    CHECK_THROWS_AS(io::matrix_from_json("{\"rows\":0,\"cols\":1,\"data\":[]}"), InputError);
    CHECK_THROWS_AS(io::matrix_from_json("{\"rows\":1,\"cols\":2,\"data\":[[1,0]]}"), InputError);
    CHECK_THROWS_AS(io::matrix_from_json("{\"rows\":1,\"cols\":1,\"data\":[[1,0,3]]}"), InputError);
    CHECK_THROWS_AS(io::matrix_from_json("{\"rows\":1,\"cols\":1,\"data\":[1]}"), InputError);
}

TEST_CASE("matrix csv") {
    const Matrix m = io::matrix_from_csv("1, 2.5,-3\n4,5e-1, 6\r\n");
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 3);
    CHECK(m(0, 1) == Complex{2.5, 0.0});
    CHECK(m(1, 1) == Complex{0.5, 0.0});

    CHECK_THROWS_AS(io::matrix_from_csv(""), InputError);
    CHECK_THROWS_AS(io::matrix_from_csv("1,2\n3\n"), InputError);
    CHECK_THROWS_AS(io::matrix_from_csv("1,x\n"), InputError);
    CHECK_THROWS_AS(io::matrix_from_csv("1,nan\n"), InputError);
    CHECK_THROWS_AS(io::matrix_from_csv("1,inf\n"), InputError);
}

TEST_CASE("frame json and csv") {
    const std::string text =
        "{\"ambient_dim\":2,\"vectors\":[[[1,0],[0,0]],[[1,0],[0,0]],[[0,0],[2,0]]]}";
    const Frame fr = io::frame_from_json(text);
    CHECK(fr.ambient_dim() == 2);
    CHECK(fr.size() == 3);
    CHECK(fr.synthesis()(1, 2) == Complex{2.0, 0.0});

    const Frame back = io::frame_from_json(io::frame_to_json(fr));
    CHECK(approx_equal(back.synthesis(), fr.synthesis(), 0.0));

    // CSV rows are vectors, so the synthesis matrix is the transpose.
    const Frame csv = io::frame_from_csv("1,0\n1,0\n0,2\n");
    CHECK(approx_equal(csv.synthesis(), fr.synthesis(), 0.0));

    CHECK_THROWS_AS(io::frame_from_json("{\"ambient_dim\":2,\"vectors\":[]}"), InputError);
    CHECK_THROWS_AS(io::frame_from_json("{\"ambient_dim\":2,\"vectors\":[[[1,0]]]}"), InputError);
    CHECK_THROWS_AS(io::frame_from_csv("0,0\n0,0\n"), InputError);
}

TEST_CASE("file dispatch by extension") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "isoproxim_io_test";
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "m.json");
        out << "{\"rows\":1,\"cols\":1,\"data\":[[2,1]]}";
    }
    const Matrix m = io::read_matrix(dir / "m.json");
    CHECK(m(0, 0) == Complex{2.0, 1.0});

    {
        std::ofstream out(dir / "m.csv");
        out << "3\n";
    }
    CHECK(io::read_matrix(dir / "m.csv")(0, 0) == Complex{3.0, 0.0});

    CHECK_THROWS_AS(io::read_matrix(dir / "missing.json"), InputError);
    {
        std::ofstream out(dir / "m.txt");
        out << "3\n";
    }
    CHECK_THROWS_AS(io::read_matrix(dir / "m.txt"), InputError);
    fs::remove_all(dir);
}

TEST_CASE("result records re-parse under the declared schemas") {
    std::mt19937_64 rng(409);
    const Matrix f = random_complex(rng, 3, 3);
    const RankKResult res = nearest_rank_k(f, 2, Gauge::frobenius());

    const std::string text = io::rank_k_result_json(res);
    CHECK(io::rank_k_result_json(res) == text); // deterministic bytes

    // The embedded minimizer is itself a valid matrix payload that
    // round-trips without drift.
    const auto start = text.find("\"minimizer\":");
    REQUIRE(start != std::string::npos);
    const auto open = text.find('{', start);
    std::size_t depth = 0;
    std::size_t end = open;
    for (; end < text.size(); ++end) {
        if (text[end] == '{') ++depth;
        if (text[end] == '}' && --depth == 0) break;
    }
    const Matrix back = io::matrix_from_json(text.substr(open, end - open + 1));
    for (std::size_t i = 0; i < back.rows(); ++i)
        for (std::size_t j = 0; j < back.cols(); ++j) CHECK(back(i, j) == res.minimizer(i, j));
}
