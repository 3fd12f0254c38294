#ifndef TWRAOI_REPORT_HPP_
#define TWRAOI_REPORT_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace twraoi {

// One output artifact: comment lines, flat records with identical keys, and
// optional footer comments (the grid argmin, for example). CSV renders
// comments as leading "# " lines; JSON carries them in the document.
struct RecordTable {
  std::vector<std::string> comments;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::vector<std::string> footer_comments;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

// Doubles with 9 significant digits.
std::string format_sig9(double v);

// RFC-4180-style quoting: fields containing commas, quotes, or newlines are
// quoted with internal quotes doubled.
std::string csv_escape(const std::string& field);

std::string render_csv(const RecordTable& table);
std::string render_json(const RecordTable& table);
std::string render(const RecordTable& table, const std::string& format);

// Writes atomically enough for our purposes: truncate and stream.
void write_file(const std::string& path, const std::string& contents);

}  // namespace twraoi

#endif  // TWRAOI_REPORT_HPP_
