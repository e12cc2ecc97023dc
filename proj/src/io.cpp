#include "ifsdf/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ifsdf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const char* what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument(std::string(what) + ": not a number: '" + t + "'");
  }
  return v;
}

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

nlohmann::json system_to_json(const IfsSystem& system) {
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : system.maps) {
    maps.push_back({{"a", m.a}, {"b", m.b}, {"slope", m.slope}, {"intercept", m.intercept}});
  }
  return {{"maps", maps}, {"p", system.p}, {"delta", system.delta}, {"identity_partition", system.identity_partition}};
}

IfsSystem system_from_json(const nlohmann::json& j) {
  try {
    IfsSystem system;
    for (const auto& m : j.at("maps")) {
      system.maps.push_back({m.at("a").get<double>(), m.at("b").get<double>(), m.at("slope").get<double>(),
                             m.at("intercept").get<double>()});
    }
    system.p = j.at("p").get<std::vector<double>>();
    system.delta = j.at("delta").get<std::vector<double>>();
    system.identity_partition = j.at("identity_partition").get<bool>();
    return system;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed IFS system JSON: ") + e.what());
  }
}

nlohmann::json solution_to_json(const InverseSolution& solution) {
  return {{"p_star", solution.p_star},
          {"D_star", solution.d_star},
          {"active_constraints", solution.active_constraints},
          {"iterations", solution.iterations},
          {"mode", to_string(solution.mode)}};
}

std::string grid_to_csv(const GridDF& f) {
  std::ostringstream out;
  out << "x,value\n";
  const auto& xs = f.xs();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j > 0 && f.left_values()[j] != f.values()[j] && f.mode() == Interpolation::kLinear) {
      out << shortest(xs[j]) << ',' << shortest(f.left_values()[j]) << '\n';
    }
    out << shortest(xs[j]) << ',' << shortest(f.values()[j]) << '\n';
  }
  return out.str();
}

GridDF grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::vector<double> xs;
  std::vector<double> values;
  std::vector<double> left;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "x,value") throw std::invalid_argument("distribution CSV: expected header 'x,value'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("distribution CSV: expected two columns");
    const double x = to_double(line.substr(0, comma), "distribution CSV");
    const double v = to_double(line.substr(comma + 1), "distribution CSV");
    if (!xs.empty() && x == xs.back()) {
      values.back() = v;
    } else {
      if (!xs.empty() && x < xs.back()) throw std::invalid_argument("distribution CSV: x must be ascending");
      xs.push_back(x);
      values.push_back(v);
      left.push_back(v);
    }
  }
  if (!header) throw std::invalid_argument("distribution CSV: empty input");
  return GridDF(std::move(xs), std::move(values), std::move(left), Interpolation::kLinear);
}

std::vector<double> parse_sample(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> out;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(to_double(line, "sample file"));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace ifsdf
