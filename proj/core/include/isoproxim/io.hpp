#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "isoproxim/frame.hpp"
#include "isoproxim/isometry.hpp"
#include "isoproxim/matrix.hpp"
#include "isoproxim/oracle.hpp"

namespace isoproxim::io {

// Matrix interchange. JSON is the canonical format:
//   {"rows": m, "cols": n, "data": [[re, im], ...]}   (row-major)
// CSV carries real matrices, one row per line.

Matrix matrix_from_json(std::string_view text);
Matrix matrix_from_csv(std::string_view text);
std::string matrix_to_json(const Matrix& m);

/// Reads a matrix file, dispatching on the .json / .csv extension.
Matrix read_matrix(const std::filesystem::path& path);

// Frame files:
//   JSON {"ambient_dim": m, "vectors": [[[re, im], ...], ...]}
//   CSV: one vector per row (transposed into synthesis columns).

Frame frame_from_json(std::string_view text);
Frame frame_from_csv(std::string_view text);
std::string frame_to_json(const Frame& frame);

Frame read_frame(const std::filesystem::path& path);

// Machine-readable result records (pretty-printed JSON, stable key order,
// byte-identical for identical inputs).

std::string rank_k_result_json(const RankKResult& result);
std::string global_result_json(const GlobalResult& result);
std::string minimizers_record_json(const RankKResult& result);
std::string distance_record_json(std::size_t k, const Gauge& gauge, double distance);
std::string frame_report_json(const FrameReport& report);
std::string fixed_excess_result_json(const FixedExcessResult& result);
std::string global_frame_result_json(const GlobalFrameResult& result, std::string_view mode);
std::string verify_report_json(const oracle::VerifyReport& report);

} // namespace isoproxim::io
