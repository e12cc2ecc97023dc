#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"
#include "ifsdf/inverse.hpp"

namespace ifsdf {

/// Raised for unreadable or unwritable files; malformed content raises
/// std::invalid_argument instead.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json system_to_json(const IfsSystem& system);
IfsSystem system_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const InverseSolution& solution);

/// `x,value` CSV. A jump at x is written as two rows: the left limit first,
/// then the value.
std::string grid_to_csv(const GridDF& f);

/// Parses `x,value` CSV (header required). Repeated x encodes a jump: the first
/// row is the left limit, the last row the value. Missing endpoints 0 and 1 are
/// not added; the table must span [0,1].
GridDF grid_from_csv(const std::string& text);

/// One real per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_sample(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ifsdf
