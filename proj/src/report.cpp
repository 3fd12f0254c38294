#include "twraoi/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twraoi {

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string csv_cell(const nlohmann::ordered_json& value) {
  if (value.is_null()) return "";  // infeasible / unavailable marker
  if (value.is_string()) return csv_escape(value.get<std::string>());
  if (value.is_boolean()) return value.get<bool>() ? "1" : "0";
  if (value.is_number_float()) return format_sig9(value.get<double>());
  return value.dump();
}

}  // namespace

std::string render_csv(const RecordTable& table) {
  std::ostringstream out;
  for (const auto& comment : table.comments) out << "# " << comment << '\n';
  if (!table.rows.empty()) {
    bool first = true;
    for (const auto& item : table.rows.front().items()) {
      if (!first) out << ',';
      out << csv_escape(item.key());
      first = false;
    }
    out << '\n';
    for (const auto& row : table.rows) {
      first = true;
      for (const auto& item : row.items()) {
        if (!first) out << ',';
        out << csv_cell(item.value());
        first = false;
      }
      out << '\n';
    }
  }
  for (const auto& comment : table.footer_comments) {
    out << "# " << comment << '\n';
  }
  return out.str();
}

std::string render_json(const RecordTable& table) {
  nlohmann::ordered_json doc;
  if (!table.comments.empty()) doc["comments"] = table.comments;
  for (const auto& item : table.extra.items()) doc[item.key()] = item.value();
  doc["rows"] = table.rows;
  if (!table.footer_comments.empty()) {
    doc["footer_comments"] = table.footer_comments;
  }
  return doc.dump(2) + "\n";
}

std::string render(const RecordTable& table, const std::string& format) {
  if (format == "csv") return render_csv(table);
  if (format == "json") return render_json(table);
  throw std::invalid_argument("unknown output format: " + format);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file " + path);
}

}  // namespace twraoi
