#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qra/experiment.hpp"

namespace qra {

inline constexpr const char* kCsvHeader =
    "experiment,seed,trial,nc,m,iteration,mse_path1,mse_path2,loss,wall_time_s";

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

std::string records_to_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_csv(const std::string& text);

/// Throws IoError with the path on failure.
void emit_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path);
std::vector<ResultRecord> read_csv(const std::filesystem::path& path);

}  // namespace qra
