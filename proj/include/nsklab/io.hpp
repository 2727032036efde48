#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nsklab/errors.hpp"

namespace nsklab {

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Scientific notation, 17 significant digits.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

using CsvCell = std::variant<double, long, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
      : out_(path), columns_(header.size()) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    write_line(header);
  }

  void row(const std::vector<CsvCell>& cells) {
    if (cells.size() != columns_) throw Error("csv row width does not match the header");
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c)) s.push_back(format_real(*d));
      else if (const auto* l = std::get_if<long>(&c)) s.push_back(std::to_string(*l));
      else s.push_back(std::get<std::string>(c));
    }
    write_line(s);
  }

 private:
  void write_line(const std::vector<std::string>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) out_ << (k ? "," : "") << v[k];
    out_ << '\n';
  }

  std::ofstream out_;
  std::size_t columns_;
};

// Run metadata written next to the CSV outputs.
struct Manifest {
  std::string experiment;
  std::string config_text;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  long steps = 0;
  double wall_seconds = 0.0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"experiment", experiment},
            {"config_hash", "fnv1a64:" + hex64(fnv1a(config_text))},
            {"config", config_text},
            {"seed", seed},
            {"outputs", outputs},
            {"steps", steps},
            {"wall_seconds", wall_seconds},
            {"extra", extra}};
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << to_json().dump(2) << '\n';
  }
};

}  // namespace nsklab
